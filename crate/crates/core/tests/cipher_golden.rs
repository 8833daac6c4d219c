use std::sync::Arc;

use achterbahn::boolfn::{parse_anf, LinearMask, TruthTable};
use achterbahn::cipher::{key_load, toy_spec, CipherSpec, CipherState, CycleKeystream, KeyIv, ScheduleVariant};
use achterbahn::registers::{lcm_period, period, NlfsrSpec};

/// Straight-line model of the toy cipher on explicit cell arrays.
mod reference {
    pub type Feedback = fn(&[u8]) -> u8;

    pub const REGS: [(usize, Feedback, usize); 4] = [
        (7, |c| c[0] ^ c[2] ^ c[4] ^ (c[2] & c[5]), 0),
        (9, |c| c[0] ^ c[3] ^ c[8] ^ (c[1] & c[5]), 2),
        (10, |c| c[0] ^ c[8] ^ c[9] ^ (c[1] & c[2]), 3),
        (11, |c| c[0] ^ c[2] ^ c[8] ^ (c[6] & c[9]), 1),
    ];

    pub fn combine(x: [u8; 4]) -> u8 {
        x[0] ^ x[3] ^ (x[1] & x[2])
    }

    fn clock(cells: &mut Vec<u8>, f: Feedback, inject: u8) {
        let fb = f(cells) ^ inject;
        cells.remove(0);
        cells.push(fb);
    }

    pub fn load(bits: &[u8], hold: bool) -> Vec<Vec<u8>> {
        let mut regs: Vec<Vec<u8>> = REGS
            .iter()
            .map(|&(len, f, _)| {
                let mut c = bits[..len].to_vec();
                for &b in &bits[len..] {
                    clock(&mut c, f, b);
                }
                c
            })
            .collect();
        let outputs = |regs: &[Vec<u8>]| [regs[0][0], regs[1][0], regs[2][0], regs[3][0]];
        let held = combine(outputs(&regs));
        for _ in 0..32 {
            let z = if hold { held } else { combine(outputs(&regs)) };
            for (c, &(_, f, _)) in regs.iter_mut().zip(&REGS) {
                clock(c, f, z);
            }
        }
        for c in regs.iter_mut() {
            let last = c.len() - 1;
            c[last] = 1;
        }
        regs
    }

    pub fn keystream(regs: &[Vec<u8>], count: usize) -> Vec<u8> {
        let mut regs = regs.to_vec();
        for (c, &(_, f, shift)) in regs.iter_mut().zip(&REGS) {
            for _ in 0..shift {
                clock(c, f, 0);
            }
        }
        (0..count)
            .map(|_| {
                let z = combine([regs[0][0], regs[1][0], regs[2][0], regs[3][0]]);
                for (c, &(_, f, _)) in regs.iter_mut().zip(&REGS) {
                    clock(c, f, 0);
                }
                z
            })
            .collect()
    }

    pub fn fill_value(cells: &[u8]) -> u64 {
        cells.iter().enumerate().fold(0, |v, (i, &b)| v | (b as u64) << i)
    }
}

fn hex_bits(h: &str) -> Vec<u8> {
    hex::decode(h).unwrap().iter().flat_map(|b| (0..8).rev().map(move |i| b >> i & 1)).collect()
}

fn pack(bits: &[bool]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |b, (i, &x)| b | (x as u8) << (7 - i)))
        .collect();
    hex::encode(bytes)
}

fn toy() -> Arc<CipherSpec> {
    Arc::new(toy_spec())
}

const VECTORS: [(&str, &str, ScheduleVariant, &str); 4] = [
    ("0000", "00", ScheduleVariant::Recompute, GOLDEN[0]),
    ("0123", "45", ScheduleVariant::Recompute, GOLDEN[1]),
    ("deadbeef", "c0de", ScheduleVariant::Recompute, GOLDEN[2]),
    ("deadbeef", "c0de", ScheduleVariant::HoldFirst, GOLDEN[3]),
];

const GOLDEN: [&str; 4] = [
    "01620d3b678d3959d599c0eb5dec4686",
    "ba442e94e77a5b0eb917f219b1491047",
    "55176b083928bc0f4e3ed8d67853534f",
    "837c43d56eda7ac88b4802c51acadfe1",
];

#[test]
fn matches_reference_model() {
    for (key, iv, variant, _) in VECTORS {
        let bits = hex_bits(&format!("{key}{iv}"));
        let regs = reference::load(&bits, variant == ScheduleVariant::HoldFirst);
        let state = key_load(toy(), &KeyIv::from_hex(key, iv, None, None).unwrap(), variant).unwrap();
        let fills: Vec<u64> = regs.iter().map(|c| reference::fill_value(c)).collect();
        assert_eq!(state.fills(), &fills[..], "{key}/{iv}");
        let expect: Vec<bool> = reference::keystream(&regs, 256).iter().map(|&b| b == 1).collect();
        assert_eq!(state.keystream(0, 256).unwrap(), expect, "{key}/{iv}");
    }
}

#[test]
fn golden_keystreams() {
    for (key, iv, variant, golden) in VECTORS {
        let state = key_load(toy(), &KeyIv::from_hex(key, iv, None, None).unwrap(), variant).unwrap();
        let got = pack(&state.keystream(0, 128).unwrap());
        assert_eq!(got, golden);
    }
}

#[test]
fn keystream_offsets_agree() {
    let state = key_load(toy(), &KeyIv::from_hex("a5a5a5", "5a", None, None).unwrap(), ScheduleVariant::Recompute)
        .unwrap();
    let long = state.keystream(0, 4000).unwrap();
    assert_eq!(state.keystream(1234, 500).unwrap(), long[1234..1734]);
    let cycles = CycleKeystream::tabulate(state.spec()).unwrap();
    let ck = CycleKeystream::new(&state, cycles).unwrap();
    for t in (0..4000).step_by(7) {
        assert_eq!(ck.bit(t as u128), long[t]);
    }
}

#[test]
fn projection_combiner_outputs_one_register() {
    let spec = Arc::new(toy_spec().with_combiner(parse_anf("x_2", 4).unwrap()).unwrap());
    let state = CipherState::new(spec.clone(), vec![1, 0x33, 0x155, 0x7ff]).unwrap();
    let r = &spec.registers[2];
    assert_eq!(state.keystream(0, 300).unwrap(), r.state(0x155).unwrap().output_sequence(0, 300));
}

#[test]
fn linear_combiner_over_two_registers_has_lcm_period() {
    let regs: Vec<NlfsrSpec> = toy_spec().registers[..2].to_vec();
    let periods: Vec<u64> = regs.iter().map(|r| period(r).unwrap()).collect();
    let p: u64 = lcm_period(&periods).unwrap().value.try_into().unwrap();
    assert_eq!(p, 127 * 511);
    let spec = CipherSpec::new("pair", regs.clone(), TruthTable::linear(LinearMask::new(2, 0b11).unwrap()).unwrap())
        .unwrap();
    let state = CipherState::new(Arc::new(spec), vec![0x2b, 0x1c4]).unwrap();
    let s = state.keystream(0, 200).unwrap();
    let a = regs[0].state(0x2b).unwrap().output_sequence(0, 200);
    let b = regs[1].state(0x1c4).unwrap().output_sequence(0, 200);
    for t in 0..200 {
        assert_eq!(s[t], a[t] ^ b[t]);
    }
    assert_eq!(state.keystream(p, 200).unwrap(), s);
}

#[test]
fn distinct_ivs_give_distinct_keystreams() {
    let mut seen = std::collections::HashSet::new();
    for iv in 0u8..32 {
        let k = KeyIv::from_hex("0f1e2d3c", &format!("{iv:02x}"), None, None).unwrap();
        let state = key_load(toy(), &k, ScheduleVariant::Recompute).unwrap();
        assert!(seen.insert(state.keystream(0, 128).unwrap()));
    }
}

#[test]
fn key_load_is_deterministic() {
    let k = KeyIv::from_hex("13579bdf", "2468", None, None).unwrap();
    let a = key_load(toy(), &k, ScheduleVariant::Recompute).unwrap();
    let b = key_load(toy(), &k, ScheduleVariant::Recompute).unwrap();
    assert_eq!(a.fills(), b.fills());
    for (r, f) in a.spec().registers.iter().zip(a.fills()) {
        assert_eq!(f >> (r.length - 1), 1);
    }
}

#[test]
fn bit_lengths_truncate_key_material() {
    let k = KeyIv::from_hex("ffff", "f0", Some(12), Some(3)).unwrap();
    assert_eq!(k.len(), 15);
    assert!(KeyIv::from_hex("ff", "f0", Some(9), None).is_err());
    assert!(KeyIv::from_hex("zz", "f0", None, None).is_err());
}
