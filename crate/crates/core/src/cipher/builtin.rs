//! Built-in cipher instances.

use std::sync::Arc;

use super::CipherSpec;
use crate::boolfn::{parse_anf, restrict_pairs, TruthTable};
use crate::registers::NlfsrSpec;

/// Combining function of Achterbahn-128, ANF over `x_0 .. x_12`.
pub const ACHTERBAHN128_COMBINER: &str = "\
x_0 + x_1 + x_2 + x_3 + x_4 + x_5 + x_7 + x_9 + x_{11} + x_{12} + x_0x_5 \
+ x_2x_{10} + x_2x_{11} + x_4x_8 + x_4x_{12} + x_5x_6 + x_6x_8 + x_6x_{10} + x_6x_{11} \
+ x_6x_{12} + x_7x_8 + x_7x_{12} + x_8x_9 + x_8x_{10} + x_9x_{10} + x_9x_{11} + x_{9}x_{12} \
+ x_{10}x_{12} + x_0x_5x_8 + x_0x_5x_{10} + x_0x_5x_{11} + x_0x_5x_{12} + x_1x_2x_8 \
+ x_1x_2x_{12} + x_1x_4x_{10} + x_1x_4x_{11} + x_1x_8x_9 + x_1x_9x_{10} \
+ x_1x_9x_{11} + x_1x_9x_{12} + x_2x_3x_8 + x_2x_3x_{12} + x_2x_4x_8 + x_2x_4x_{10} + x_2x_4x_{11} \
+ x_2x_4x_{12} + x_2x_7x_8 + x_2x_7x_{12} + x_2x_8x_{10} + x_2x_8x_{11} + x_2x_9x_{10} \
+ x_2x_9x_{11} + x_2x_{10}x_{12} + x_2x_{11}x_{12} + x_3x_4x_8 + x_3x_4x_{12} + x_3x_8x_9 \
+ x_3x_9x_{12} + x_4x_7x_8 + x_4x_7x_{12} + x_4x_8x_9 + x_4x_9x_{12} + x_5x_6x_8 \
+ x_5x_6x_{10} + x_5x_6x_{11} + x_5x_6x_{12} + x_6x_8x_{10} + x_6x_8x_{11} + x_6x_{10}x_{12} \
+ x_6x_{11}x_{12} + x_7x_8x_9 + x_7x_9x_{12} + x_8x_9x_{10} + x_8x_9x_{11} + x_9x_{10}x_{12} \
+ x_9x_{11}x_{12} + x_0x_5x_8x_{10} + x_0x_5x_8x_{11} + x_0x_5x_{10}x_{12} + x_0x_5x_{11}x_{12} \
+ x_1x_2x_3x_8 + x_1x_2x_3x_{12} + x_1x_2x_7x_8 + x_1x_2x_7x_{12} + x_1x_3x_5x_8 \
+ x_1x_3x_5x_{12} + x_1x_3x_8x_9 + x_1x_3x_9x_{12} + x_1x_4x_8x_{10} + x_1x_4x_8x_{11} \
+ x_1x_4x_{10}x_{12} + x_1x_4x_{11}x_{12} + x_1x_5x_7x_8 + x_1x_5x_7x_{12} + x_1x_7x_8x_9 \
+ x_1x_7x_9x_{12} + x_1x_8x_9x_{10} + x_1x_8x_9x_{11} + x_1x_9x_{10}x_{12} + x_1x_9x_{11}x_{12} \
+ x_2x_3x_4x_8 + x_2x_3x_4x_{12} + x_2x_3x_5x_8 + x_2x_3x_5x_{12} + x_2x_4x_7x_8 \
+ x_2x_4x_7x_{12} + x_2x_4x_8x_{10} + x_2x_4x_8x_{11} + x_2x_4x_{10}x_{12} + x_2x_4x_{11}x_{12} \
+ x_2x_5x_7x_8 + x_2x_5x_7x_{12} + x_2x_8x_9x_{10} + x_2x_8x_9x_{11} + x_2x_9x_{10}x_{12} \
+ x_2x_9x_{11}x_{12} + x_3x_4x_8x_9 + x_3x_4x_9x_{12} + x_4x_7x_8x_9 + x_4x_7x_9x_{12} \
+ x_5x_6x_8x_{10} + x_5x_6x_8x_{11} + x_5x_6x_{10}x_{12} + x_5x_6x_{11}x_{12}";

/// Keystream length cap of both Achterbahn-128/80 generators.
pub const ACHTERBAHN_KEYSTREAM_LIMIT: u128 = 1 << 63;

/// Feedbacks of the toy registers. Each is nonlinear with period `2^L - 1`,
/// found by random search over `x_0 + x_a + x_b + x_c x_d` and checked by
/// walking the cycle.
pub const TOY_REGISTERS: [(u32, &str, u64); 4] = [
    (7, "x_0 + x_2 + x_4 + x_2x_5", 0),
    (9, "x_0 + x_3 + x_8 + x_1x_5", 2),
    (10, "x_0 + x_8 + x_9 + x_1x_2", 3),
    (11, "x_0 + x_2 + x_8 + x_6x_9", 1),
];

/// Toy combiner: 1-resilient, best affine bias `|eps| = 1/2`, with the
/// nonlinear part confined to the two registers an attack recovers.
pub const TOY_COMBINER: &str = "x_0 + x_3 + x_1x_2";

pub fn achterbahn128_combiner() -> TruthTable {
    parse_anf(ACHTERBAHN128_COMBINER, 13).expect("built-in ANF parses")
}

/// `G(x_1, .., x_11) = F(0, x_1, .., x_11, 0)`, renumbered to `x_0 .. x_10`.
pub fn achterbahn80_combiner() -> TruthTable {
    restrict_pairs(&achterbahn128_combiner(), &[(0, false), (12, false)])
        .expect("valid restriction")
}

/// Thirteen registers `R0 .. R12` of lengths `21 + i`, combiner `F`.
pub fn achterbahn128_spec() -> CipherSpec {
    let registers = (0..13)
        .map(|i| NlfsrSpec::declared(i, 21 + i as u32).expect("valid length"))
        .collect();
    CipherSpec::new("achterbahn-128", registers, achterbahn128_combiner())
        .expect("consistent built-in")
        .with_keystream_limit(ACHTERBAHN_KEYSTREAM_LIMIT)
}

/// Registers `R1 .. R11` of Achterbahn-128, combiner `G`.
pub fn achterbahn80_spec() -> CipherSpec {
    let registers = (1..12)
        .map(|i| NlfsrSpec::declared(i, 21 + i as u32).expect("valid length"))
        .collect();
    CipherSpec::new("achterbahn-80", registers, achterbahn80_combiner())
        .expect("consistent built-in")
        .with_keystream_limit(ACHTERBAHN_KEYSTREAM_LIMIT)
}

/// Register lengths of Achterbahn v2 that its published attacks touch,
/// `(label, length)`.
pub const ACHTERBAHN_V2_LENGTHS: [(usize, u32); 6] = [(1, 19), (2, 22), (3, 23), (4, 25), (6, 27), (8, 29)];

/// Registers of Achterbahn v2 known by length only. The v2 combining function
/// is not reproduced, so this is a register bank rather than a cipher.
pub fn achterbahn_v2_registers() -> Vec<NlfsrSpec> {
    ACHTERBAHN_V2_LENGTHS
        .iter()
        .map(|&(label, len)| NlfsrSpec::declared(label, len).expect("valid length"))
        .collect()
}

/// Four-register toy cipher with lengths 7, 9, 10, 11.
pub fn toy_spec() -> CipherSpec {
    let registers = TOY_REGISTERS
        .iter()
        .enumerate()
        .map(|(i, &(len, fb, shift))| {
            NlfsrSpec::new(i, len, fb)
                .expect("valid toy register")
                .with_shift(shift)
        })
        .collect();
    CipherSpec::new("toy", registers, parse_anf(TOY_COMBINER, 4).expect("toy ANF"))
        .expect("consistent toy")
}

/// Looks up a built-in cipher by name.
pub fn builtin_spec(name: &str) -> Option<Arc<CipherSpec>> {
    let spec = match name.to_ascii_lowercase().as_str() {
        "achterbahn-128" | "achterbahn128" | "a128" => achterbahn128_spec(),
        "achterbahn-80" | "achterbahn80" | "a80" => achterbahn80_spec(),
        "toy" => toy_spec(),
        _ => return None,
    };
    Some(Arc::new(spec))
}

pub fn builtin_registers(name: &str) -> Option<Vec<NlfsrSpec>> {
    match name.to_ascii_lowercase().as_str() {
        "achterbahn-v2" | "v2" => Some(achterbahn_v2_registers()),
        other => builtin_spec(other).map(|s| s.registers.clone()),
    }
}
