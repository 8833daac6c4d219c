use achterbahn::cipher::toy_spec;
use achterbahn::registers::{decimate, lcm_period, max_period, period, NlfsrSpec, RegisterCycle};
use proptest::prelude::*;

fn toy_register(i: usize) -> NlfsrSpec {
    toy_spec().registers[i].clone()
}

fn reg_and_fill() -> impl Strategy<Value = (usize, u64)> {
    (0usize..4).prop_flat_map(|i| {
        let len = toy_register(i).length;
        (Just(i), 1u64..(1u64 << len))
    })
}

proptest! {
    #[test]
    fn sequences_concatenate((i, fill) in reg_and_fill(), t in 0u64..3000, a in 0usize..200, b in 0usize..200) {
        let r = toy_register(i);
        let s = r.state(fill).unwrap();
        let whole = s.output_sequence(t, a + b);
        let mut joined = s.output_sequence(t, a);
        joined.extend(s.output_sequence(t + a as u64, b));
        prop_assert_eq!(whole, joined);
    }

    #[test]
    fn clocking_is_additive((i, fill) in reg_and_fill(), a in 0u64..2000, b in 0u64..2000) {
        let r = toy_register(i);
        let s = r.state(fill).unwrap();
        prop_assert_eq!(s.clock(a).clock(b), s.clock(a + b));
    }

    #[test]
    fn decimation_is_direct_indexing((i, fill) in reg_and_fill(), k in 1usize..40, count in 0usize..100) {
        let r = toy_register(i);
        let s = r.state(fill).unwrap();
        let full = s.output_sequence(0, k * count + 1);
        let dec: Vec<bool> = decimate(s.stream(0), k, count).unwrap().collect();
        let direct: Vec<bool> = (0..count).map(|j| full[j * k]).collect();
        prop_assert_eq!(dec, direct);
    }

    #[test]
    fn cycle_lookup_matches_stepping((i, fill) in reg_and_fill(), t in 0u64..5000) {
        let r = toy_register(i);
        let cycle = RegisterCycle::new(&r).unwrap();
        let phase = cycle.phase_of(fill).unwrap();
        prop_assert_eq!(cycle.fill_at(phase), fill);
        let seq = r.state(fill).unwrap().output_sequence(t, 16);
        for (j, &bit) in seq.iter().enumerate() {
            prop_assert_eq!(cycle.bit(phase, (t + j as u64) as u128), bit);
        }
    }

    #[test]
    fn decimating_by_the_period_is_constant((i, fill) in reg_and_fill(), t0 in 0u64..500) {
        let r = toy_register(i);
        let p = period(&r).unwrap() as usize;
        let s = r.state(fill).unwrap();
        let dec: Vec<bool> = decimate(s.stream(t0), p, 8).unwrap().collect();
        prop_assert!(dec.iter().all(|&b| b == dec[0]));
    }
}

#[test]
fn toy_periods_are_maximal() {
    for r in toy_spec().registers {
        assert_eq!(period(&r).unwrap(), max_period(r.length));
        assert!(RegisterCycle::new(&r).is_ok());
    }
}

#[test]
fn full_cycle_returns_to_start() {
    for r in toy_spec().registers {
        let p = max_period(r.length);
        for fill in [1u64, 2, (1 << r.length) - 1] {
            assert_eq!(r.state(fill).unwrap().clock(p).fill(), fill);
        }
    }
}

#[test]
fn rotation_register() {
    let r = NlfsrSpec::new(0, 3, "x_0").unwrap();
    assert_eq!(period(&r).unwrap(), 3);
    let bits = r.state(0b001).unwrap().output_sequence(0, 7);
    assert_eq!(bits, [true, false, false, true, false, false, true]);
    assert!(RegisterCycle::new(&r).is_err());
}

#[test]
fn output_shift_delays_the_stream() {
    let base = toy_register(1).with_shift(0);
    let shifted = toy_register(1).with_shift(5);
    let a = base.state(0x5a).unwrap().output_sequence(5, 50);
    let b = shifted.state(0x5a).unwrap().output_sequence(0, 50);
    assert_eq!(a, b);
}

#[test]
fn invalid_registers_rejected() {
    assert!(NlfsrSpec::new(0, 0, "x_0").is_err());
    assert!(NlfsrSpec::new(0, 65, "x_0").is_err());
    assert!(NlfsrSpec::new(0, 4, "1 + x_0").is_err());
    let r = toy_register(0);
    assert!(r.state(0).is_err());
    assert!(r.state(1 << 7).is_err());
    assert!(decimate(std::iter::repeat(true), 0, 3).is_err());
}

#[test]
fn declared_registers_have_no_stream() {
    let r = NlfsrSpec::declared(5, 26).unwrap();
    assert_eq!(period(&r).unwrap(), (1 << 26) - 1);
    assert!(r.state(1).is_err());
}

#[test]
fn lcm_of_coprime_periods() {
    let l = lcm_period(&[127, 511, 1023]).unwrap();
    assert_eq!(l.value, (127u64 * 511 * 1023).into());
    assert!((l.log2 - (l.value.to_string().parse::<f64>().unwrap()).log2()).abs() < 1e-12);
    assert!(lcm_period(&[0]).is_err());
    assert_eq!(lcm_period(&[21, 6]).unwrap().value, 42u64.into());
}
