//! Keystream generators built from registers and a combining function, and
//! the key-loading schedule.

mod builtin;

use std::collections::HashSet;
use std::sync::Arc;

pub use builtin::*;

use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::registers::{NlfsrSpec, RegisterCycle, RegisterState};

/// Ordered registers plus a combiner with one input per register.
/// Combiner variable `i` reads register `registers[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherSpec {
    pub name: String,
    pub registers: Vec<NlfsrSpec>,
    pub combiner: TruthTable,
    /// Largest keystream position (exclusive) the generator may produce.
    pub keystream_limit: Option<u128>,
}

impl CipherSpec {
    pub fn new(name: impl Into<String>, registers: Vec<NlfsrSpec>, combiner: TruthTable) -> Result<Self> {
        if combiner.n() != registers.len() {
            return Err(Error::InvalidCipher(format!(
                "combiner has {} inputs for {} registers",
                combiner.n(),
                registers.len()
            )));
        }
        let mut seen = HashSet::new();
        for r in &registers {
            if !seen.insert(r.label) {
                return Err(Error::InvalidCipher(format!("duplicate register label {}", r.label)));
            }
        }
        Ok(CipherSpec { name: name.into(), registers, combiner, keystream_limit: None })
    }

    pub fn with_keystream_limit(mut self, limit: u128) -> Self {
        self.keystream_limit = Some(limit);
        self
    }

    pub fn position_of(&self, label: usize) -> Option<usize> {
        self.registers.iter().position(|r| r.label == label)
    }

    pub fn register(&self, label: usize) -> Option<&NlfsrSpec> {
        self.registers.iter().find(|r| r.label == label)
    }

    pub fn max_length(&self) -> u32 {
        self.registers.iter().map(|r| r.length).max().unwrap_or(0)
    }

    pub fn require_feedbacks(&self) -> Result<()> {
        for r in &self.registers {
            r.feedback()?;
        }
        Ok(())
    }

    /// Replaces the combiner, keeping the registers.
    pub fn with_combiner(&self, combiner: TruthTable) -> Result<Self> {
        let mut s = CipherSpec::new(self.name.clone(), self.registers.clone(), combiner)?;
        s.keystream_limit = self.keystream_limit;
        Ok(s)
    }
}

/// One fill per register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherState {
    spec: Arc<CipherSpec>,
    fills: Vec<u64>,
}

impl CipherState {
    pub fn new(spec: Arc<CipherSpec>, fills: Vec<u64>) -> Result<Self> {
        if fills.len() != spec.registers.len() {
            return Err(Error::InvalidCipher(format!(
                "{} fills for {} registers",
                fills.len(),
                spec.registers.len()
            )));
        }
        for (r, &f) in spec.registers.iter().zip(&fills) {
            RegisterState::new(r, f)?;
        }
        Ok(CipherState { spec, fills })
    }

    pub fn spec(&self) -> &Arc<CipherSpec> {
        &self.spec
    }

    pub fn fills(&self) -> &[u64] {
        &self.fills
    }

    pub fn fill_of(&self, label: usize) -> Option<u64> {
        self.spec.position_of(label).map(|i| self.fills[i])
    }

    pub fn register(&self, pos: usize) -> RegisterState<'_> {
        RegisterState::new(&self.spec.registers[pos], self.fills[pos]).expect("validated on construction")
    }

    /// Streaming generator of `S(t0), S(t0 + 1), ...`.
    pub fn generator(&self, t0: u64) -> Result<Keystream<'_>> {
        let regs = self
            .spec
            .registers
            .iter()
            .enumerate()
            .map(|(i, _)| self.register(i).stream(t0))
            .collect();
        Ok(Keystream {
            combiner: &self.spec.combiner,
            regs,
            position: t0 as u128,
            limit: self.spec.keystream_limit,
        })
    }

    pub fn keystream(&self, t0: u64, count: usize) -> Result<Vec<bool>> {
        check_limit(&self.spec, t0 as u128 + count as u128)?;
        let mut out = Vec::with_capacity(count);
        let mut gen = self.generator(t0)?;
        for _ in 0..count {
            out.push(gen.next().expect("within limit")?);
        }
        Ok(out)
    }
}

fn check_limit(spec: &CipherSpec, end: u128) -> Result<()> {
    if let Some(limit) = spec.keystream_limit {
        if end > limit {
            return Err(Error::KeystreamLimit { requested: end, limit });
        }
    }
    Ok(())
}

/// `S(t) = combiner(x_0(t), .., x_{n-1}(t))`, one bit per call to `next`.
pub struct Keystream<'a> {
    combiner: &'a TruthTable,
    regs: Vec<crate::registers::RegisterStream<'a>>,
    position: u128,
    limit: Option<u128>,
}

impl Iterator for Keystream<'_> {
    type Item = Result<bool>;

    fn next(&mut self) -> Option<Result<bool>> {
        if let Some(limit) = self.limit {
            if self.position >= limit {
                return Some(Err(Error::KeystreamLimit { requested: self.position + 1, limit }));
            }
        }
        let mut x = 0usize;
        for (i, r) in self.regs.iter_mut().enumerate() {
            if r.next().expect("register streams are endless") {
                x |= 1 << i;
            }
        }
        self.position += 1;
        Some(Ok(self.combiner.get(x)))
    }
}

/// Random-access keystream for ciphers whose registers all have tabulable
/// maximal periods (toy scale).
#[derive(Clone, Debug)]
pub struct CycleKeystream {
    spec: Arc<CipherSpec>,
    cycles: Arc<Vec<RegisterCycle>>,
    phases: Vec<u64>,
}

impl CycleKeystream {
    pub fn tabulate(spec: &CipherSpec) -> Result<Arc<Vec<RegisterCycle>>> {
        Ok(Arc::new(spec.registers.iter().map(RegisterCycle::new).collect::<Result<_>>()?))
    }

    pub fn new(state: &CipherState, cycles: Arc<Vec<RegisterCycle>>) -> Result<Self> {
        let phases = cycles
            .iter()
            .zip(state.fills())
            .map(|(c, &f)| {
                c.phase_of(f)
                    .ok_or_else(|| Error::InvalidRegister(format!("fill {f:#x} not on the cycle")))
            })
            .collect::<Result<_>>()?;
        Ok(CycleKeystream { spec: state.spec().clone(), cycles, phases })
    }

    #[inline]
    pub fn bit(&self, t: u128) -> bool {
        let mut x = 0usize;
        for (i, (c, &p)) in self.cycles.iter().zip(&self.phases).enumerate() {
            if c.bit(p, t) {
                x |= 1 << i;
            }
        }
        self.spec.combiner.get(x)
    }

    pub fn cycles(&self) -> &Arc<Vec<RegisterCycle>> {
        &self.cycles
    }
}

/// Key and IV as bit strings, loaded as `K || IV`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyIv {
    pub key: Vec<bool>,
    pub iv: Vec<bool>,
}

impl KeyIv {
    pub fn new(key: Vec<bool>, iv: Vec<bool>) -> Self {
        KeyIv { key, iv }
    }

    /// Hex strings, most significant bit of each byte first. `key_bits` and
    /// `iv_bits` truncate to a bit length (default: whole bytes).
    pub fn from_hex(key: &str, iv: &str, key_bits: Option<usize>, iv_bits: Option<usize>) -> Result<Self> {
        Ok(KeyIv { key: hex_bits(key, key_bits)?, iv: hex_bits(iv, iv_bits)? })
    }

    pub fn bits(&self) -> Vec<bool> {
        self.key.iter().chain(&self.iv).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.key.len() + self.iv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn hex_bits(text: &str, bits: Option<usize>) -> Result<Vec<bool>> {
    let bytes = hex::decode(text.trim()).map_err(|e| Error::InvalidParameter(format!("bad hex '{text}': {e}")))?;
    let mut out: Vec<bool> = bytes
        .iter()
        .flat_map(|b| (0..8).rev().map(move |i| b >> i & 1 == 1))
        .collect();
    if let Some(n) = bits {
        if n > out.len() {
            return Err(Error::InvalidParameter(format!("{n} bits requested from {} hex bits", out.len())));
        }
        out.truncate(n);
    }
    Ok(out)
}

/// How the combiner bit enters the feedback during the 32 mixing clocks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScheduleVariant {
    /// Re-evaluate the combiner on the current register outputs every clock.
    #[default]
    Recompute,
    /// Evaluate it once, then inject that same bit for all 32 clocks.
    HoldFirst,
}

pub const MIXING_CLOCKS: usize = 32;

/// Key loading:
/// 1. fill register `i` with the first `L_i` bits of `K||IV` (bit `j` into cell `j`);
/// 2. clock it `a - L_i` more times, XORing the remaining bits of `K||IV`
///    into the feedback, one bit per clock, in order;
/// 3. clock all registers 32 times with the combiner output (on the unshifted
///    output cells) XORed into every feedback;
/// 4. set the last cell of every register to 1.
pub fn key_load(spec: Arc<CipherSpec>, keyiv: &KeyIv, variant: ScheduleVariant) -> Result<CipherState> {
    spec.require_feedbacks()?;
    let bits = keyiv.bits();
    let a = bits.len();
    if a < spec.max_length() as usize {
        return Err(Error::KeyTooShort { total: a, max_len: spec.max_length() });
    }
    let mut fills: Vec<u64> = spec
        .registers
        .iter()
        .map(|r| load_register(r, &bits))
        .collect();

    let combine = |fills: &[u64]| {
        let x = fills
            .iter()
            .enumerate()
            .fold(0usize, |x, (i, f)| x | ((*f as usize & 1) << i));
        spec.combiner.get(x)
    };
    let held = combine(&fills);
    for _ in 0..MIXING_CLOCKS {
        let z = match variant {
            ScheduleVariant::Recompute => combine(&fills),
            ScheduleVariant::HoldFirst => held,
        };
        for (r, f) in spec.registers.iter().zip(fills.iter_mut()) {
            *f = r.step_raw(*f, z);
        }
    }
    for (r, f) in spec.registers.iter().zip(fills.iter_mut()) {
        *f |= 1 << (r.length - 1);
    }
    CipherState::new(spec, fills)
}

/// Steps 1 and 2 of the schedule for one register.
fn load_register(r: &NlfsrSpec, bits: &[bool]) -> u64 {
    let len = r.length as usize;
    let mut fill = bits[..len]
        .iter()
        .enumerate()
        .fold(0u64, |f, (j, &b)| f | ((b as u64) << j));
    for &b in &bits[len..] {
        fill = r.step_raw(fill, b);
    }
    fill
}
