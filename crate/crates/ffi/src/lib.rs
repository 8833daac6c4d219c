//! C interface to the workbench.
//!
//! Every fallible function returns an [`AchStatus`]. On failure the message
//! can be read with [`ach_last_error`] from the same thread. Objects are
//! opaque handles created by `*_new`/`*_builtin`/`ach_key_load` and released
//! with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use achterbahn::attack::{builtin_plan, sample_size, CostModel};
use achterbahn::boolfn::{parse_anf, walsh_transform, Bias, LinearMask, TruthTable};
use achterbahn::cipher::{
    achterbahn128_combiner, achterbahn80_combiner, builtin_spec, key_load, CipherSpec, CipherState, KeyIv,
    ScheduleVariant,
};
use achterbahn::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AchStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A string argument is not valid UTF-8.
    Utf8 = 3,
    BufferTooSmall = 4,
    /// The operation needs data the object does not have, e.g. clocking a
    /// register whose feedback is unknown.
    Unsupported = 5,
    KeystreamLimit = 6,
    Panic = 7,
}

/// Boolean function on `n <= 20` variables.
pub struct AchTruthTable {
    inner: TruthTable,
}

pub struct AchCipher {
    inner: Arc<CipherSpec>,
}

/// Register fills of a key-loaded cipher.
pub struct AchState {
    inner: CipherState,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AchProfile {
    pub n: usize,
    pub balanced: bool,
    pub algebraic_degree: u32,
    /// -1 when unbalanced.
    pub resiliency_order: i32,
    pub nonlinearity: u64,
    pub algebraic_immunity: u32,
}

/// log2 figures of one attack plan. `log2_folded_time` is NaN when the plan
/// has no folded variant.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AchEstimate {
    pub parity_terms: u64,
    pub log2_samples: f64,
    pub log2_data: f64,
    pub log2_time: f64,
    pub log2_time_with_terms: f64,
    pub log2_folded_time: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Fail(AchStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::MissingFeedback { .. } | Error::PeriodUnavailable { .. } => AchStatus::Unsupported,
            Error::KeystreamLimit { .. } => AchStatus::KeystreamLimit,
            _ => AchStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            AchStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AchStatus::Panic
        }
    }
}

fn null(name: &str) -> Fail {
    Fail(AchStatus::NullPointer, format!("{name} is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AchStatus::Utf8, format!("{name} is not UTF-8")))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, name: &str) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn bits_of(p: *const u8, bits: usize, name: &str) -> Result<Vec<bool>, Fail> {
    if bits == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(name));
    }
    let bytes = std::slice::from_raw_parts(p, bits.div_ceil(8));
    Ok((0..bits).map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1).collect())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns its full length in bytes.
/// `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ach_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ach_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses an ANF such as `"x_0 + x_1x_2"` over `n` variables.
///
/// # Safety
/// `anf` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_from_anf(
    anf: *const c_char,
    n: usize,
    out_table: *mut *mut AchTruthTable,
) -> AchStatus {
    guard(|| {
        let slot = out(out_table, "out_table")?;
        let inner = parse_anf(text(anf, "anf")?, n)?;
        *slot = Box::into_raw(Box::new(AchTruthTable { inner }));
        Ok(())
    })
}

/// `"F"` (13 variables) or `"G"` (11 variables).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_builtin(name: *const c_char, out_table: *mut *mut AchTruthTable) -> AchStatus {
    guard(|| {
        let slot = out(out_table, "out_table")?;
        let inner = match text(name, "name")? {
            "F" | "f" => achterbahn128_combiner(),
            "G" | "g" => achterbahn80_combiner(),
            other => return Err(Fail(AchStatus::InvalidArgument, format!("unknown function {other:?}"))),
        };
        *slot = Box::into_raw(Box::new(AchTruthTable { inner }));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_free(table: *mut AchTruthTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_vars(table: *const AchTruthTable, out_n: *mut usize) -> AchStatus {
    guard(|| {
        *out(out_n, "out_n")? = deref(table, "table")?.inner.n();
        Ok(())
    })
}

/// Writes the `2^n` Walsh coefficients.
///
/// # Safety
/// `table` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_walsh(table: *const AchTruthTable, out_w: *mut i32, len: usize) -> AchStatus {
    guard(|| {
        let t = &deref(table, "table")?.inner;
        if len < t.len() {
            return Err(Fail(AchStatus::BufferTooSmall, format!("need {} values, got {len}", t.len())));
        }
        let dst = slice_mut(out_w, len, "out")?;
        dst[..t.len()].copy_from_slice(&walsh_transform(t));
        Ok(())
    })
}

/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_profile(table: *const AchTruthTable, out_p: *mut AchProfile) -> AchStatus {
    guard(|| {
        let p = achterbahn::boolfn::profile(&deref(table, "table")?.inner);
        *out(out_p, "out")? = AchProfile {
            n: p.n,
            balanced: p.balanced,
            algebraic_degree: p.algebraic_degree,
            resiliency_order: p.resiliency_order,
            nonlinearity: p.nonlinearity,
            algebraic_immunity: p.algebraic_immunity,
        };
        Ok(())
    })
}

/// Bias `eps` of the linear function selected by `mask` (bit `i` = `x_i`):
/// `Pr[f = l] = (1 + eps) / 2`.
///
/// # Safety
/// `table` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_truth_table_bias(table: *const AchTruthTable, mask: u64, out_eps: *mut f64) -> AchStatus {
    guard(|| {
        let t = &deref(table, "table")?.inner;
        let b = t.bias_at(LinearMask::new(t.n(), mask)?)?;
        *out(out_eps, "out")? = b.epsilon;
        Ok(())
    })
}

/// `"a128"`, `"a80"` or `"toy"`. Only the toy cipher can be key-loaded.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_cipher_builtin(name: *const c_char, out_cipher: *mut *mut AchCipher) -> AchStatus {
    guard(|| {
        let slot = out(out_cipher, "out_cipher")?;
        let name = text(name, "name")?;
        let inner = builtin_spec(name)
            .ok_or_else(|| Fail(AchStatus::InvalidArgument, format!("unknown cipher {name:?}")))?;
        *slot = Box::into_raw(Box::new(AchCipher { inner }));
        Ok(())
    })
}

/// # Safety
/// `cipher` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ach_cipher_free(cipher: *mut AchCipher) {
    if !cipher.is_null() {
        drop(Box::from_raw(cipher));
    }
}

/// # Safety
/// `cipher` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_cipher_register_count(cipher: *const AchCipher, out_n: *mut usize) -> AchStatus {
    guard(|| {
        *out(out_n, "out_n")? = deref(cipher, "cipher")?.inner.registers.len();
        Ok(())
    })
}

/// Key loading. Key and IV are bit strings packed most significant bit
/// first; `key_bits`/`iv_bits` give their lengths. `hold_first` selects the
/// mixing variant that injects the first combiner output on every clock.
///
/// # Safety
/// `key`/`iv` must hold `ceil(bits / 8)` bytes; `cipher` must be a live
/// handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_key_load(
    cipher: *const AchCipher,
    key: *const u8,
    key_bits: usize,
    iv: *const u8,
    iv_bits: usize,
    hold_first: bool,
    out_state: *mut *mut AchState,
) -> AchStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        let spec = deref(cipher, "cipher")?.inner.clone();
        let keyiv = KeyIv::new(bits_of(key, key_bits, "key")?, bits_of(iv, iv_bits, "iv")?);
        let variant = if hold_first { ScheduleVariant::HoldFirst } else { ScheduleVariant::Recompute };
        let inner = key_load(spec, &keyiv, variant)?;
        *slot = Box::into_raw(Box::new(AchState { inner }));
        Ok(())
    })
}

/// Builds a state from explicit fills, one per register in cipher order.
///
/// # Safety
/// `fills` must hold `count` values; `cipher` must be a live handle; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_state_from_fills(
    cipher: *const AchCipher,
    fills: *const u64,
    count: usize,
    out_state: *mut *mut AchState,
) -> AchStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        let spec = deref(cipher, "cipher")?.inner.clone();
        if fills.is_null() && count > 0 {
            return Err(null("fills"));
        }
        let fills = if count == 0 { Vec::new() } else { std::slice::from_raw_parts(fills, count).to_vec() };
        let inner = CipherState::new(spec, fills)?;
        *slot = Box::into_raw(Box::new(AchState { inner }));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ach_state_free(state: *mut AchState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Copies the register fills (bit `i` = cell `i`).
///
/// # Safety
/// `state` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ach_state_fills(state: *const AchState, out_fills: *mut u64, len: usize) -> AchStatus {
    guard(|| {
        let fills = deref(state, "state")?.inner.fills();
        if len < fills.len() {
            return Err(Fail(AchStatus::BufferTooSmall, format!("need {} values, got {len}", fills.len())));
        }
        slice_mut(out_fills, len, "out")?[..fills.len()].copy_from_slice(fills);
        Ok(())
    })
}

/// Writes keystream bits `S(t0) .. S(t0 + count - 1)`, one 0/1 byte each.
///
/// # Safety
/// `state` must be a live handle; `out` must hold `count` bytes.
#[no_mangle]
pub unsafe extern "C" fn ach_state_keystream(
    state: *const AchState,
    t0: u64,
    out_bits: *mut u8,
    count: usize,
) -> AchStatus {
    guard(|| {
        let bits = deref(state, "state")?.inner.keystream(t0, count)?;
        let dst = slice_mut(out_bits, count, "out")?;
        for (d, b) in dst.iter_mut().zip(bits) {
            *d = b as u8;
        }
        Ok(())
    })
}

/// Complexity of a built-in plan (`"v2"`, `"a80"`, `"a128"`, `"toy"`, ...)
/// with the default cost model.
///
/// # Safety
/// `plan` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_estimate_builtin(plan: *const c_char, d: f64, out_est: *mut AchEstimate) -> AchStatus {
    guard(|| {
        let slot = out(out_est, "out")?;
        let e = builtin_plan(text(plan, "plan")?)?.estimate(d, &CostModel::default())?;
        *slot = AchEstimate {
            parity_terms: e.parity_terms,
            log2_samples: e.log2_samples,
            log2_data: e.log2_data,
            log2_time: e.log2_time,
            log2_time_with_terms: e.log2_time_with_terms,
            log2_folded_time: e.folded.map_or(f64::NAN, |f| f.log2_time),
        };
        Ok(())
    })
}

/// Samples `ceil(d / eps^2)` and error probability `Phi(-sqrt(d) / 2)` of the
/// distinguisher for bias `eps`.
///
/// # Safety
/// Both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ach_sample_size(
    epsilon: f64,
    d: f64,
    out_samples: *mut u64,
    out_error: *mut f64,
) -> AchStatus {
    guard(|| {
        let samples = out(out_samples, "out_samples")?;
        let error = out(out_error, "out_error")?;
        let p = sample_size(Bias::new(epsilon)?, d)?;
        *samples = u64::try_from(p.samples_needed)
            .map_err(|_| Fail(AchStatus::InvalidArgument, "sample count exceeds 64 bits".into()))?;
        *error = p.error_prob;
        Ok(())
    })
}
