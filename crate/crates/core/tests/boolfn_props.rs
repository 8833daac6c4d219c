use std::collections::BTreeMap;

use achterbahn::boolfn::{
    best_affine_approximations, mobius_transform, parse_anf, profile, restrict, walsh_naive, walsh_transform, Anf,
    LinearMask, TruthTable,
};
use achterbahn::cipher::{achterbahn128_combiner, achterbahn80_combiner};
use proptest::prelude::*;

fn table(n: usize) -> impl Strategy<Value = TruthTable> {
    prop::collection::vec(any::<bool>(), 1usize << n).prop_map(|b| TruthTable::from_bits(&b).unwrap())
}

fn sized_table(max_n: usize) -> impl Strategy<Value = TruthTable> {
    (2..=max_n).prop_flat_map(table)
}

proptest! {
    #[test]
    fn parseval(f in sized_table(12)) {
        let n = f.n();
        let sum: i64 = walsh_transform(&f).iter().map(|&w| (w as i64) * (w as i64)).sum();
        prop_assert_eq!(sum, 1i64 << (2 * n));
    }

    #[test]
    fn butterfly_matches_definition(f in sized_table(8)) {
        prop_assert_eq!(walsh_transform(&f), walsh_naive(&f));
    }

    #[test]
    fn mobius_is_an_involution(f in sized_table(10)) {
        prop_assert_eq!(mobius_transform(&mobius_transform(&f)), f);
    }

    #[test]
    fn anf_roundtrip(f in sized_table(9)) {
        let anf = f.to_anf();
        prop_assert_eq!(anf.to_truth_table().unwrap(), f.clone());
        let reparsed = Anf::parse(&anf.to_string(), f.n()).unwrap();
        prop_assert_eq!(reparsed, anf);
    }

    #[test]
    fn approximation_biases_are_exact(f in sized_table(7), w in 0u32..=7) {
        let n = f.n();
        for a in best_affine_approximations(&f, w) {
            prop_assert!(a.mask.weight() <= w);
            let agree = (0..1usize << n).filter(|&x| f.get(x) == a.mask.eval(x as u64)).count();
            prop_assert_eq!(agree as f64 / (1u64 << n) as f64, a.bias.prob_agree());
        }
    }

    #[test]
    fn restriction_matches_direct_substitution(
        f in sized_table(8),
        picks in prop::collection::btree_map(0usize..8, any::<bool>(), 0..3),
    ) {
        let n = f.n();
        let fixed: BTreeMap<usize, bool> = picks.into_iter().filter(|(i, _)| *i < n).collect();
        let free: Vec<usize> = (0..n).filter(|i| !fixed.contains_key(i)).collect();
        prop_assume!(!free.is_empty());
        let g = restrict(&f, &fixed).unwrap();
        prop_assert_eq!(g.n(), free.len());
        for y in 0..1usize << free.len() {
            let mut x = 0usize;
            for (&i, &v) in &fixed {
                x |= (v as usize) << i;
            }
            for (j, &i) in free.iter().enumerate() {
                x |= (y >> j & 1) << i;
            }
            prop_assert_eq!(g.get(y), f.get(x));
        }
    }

    #[test]
    fn resilient_functions_have_no_light_nonzero_bias(f in sized_table(8)) {
        let p = profile(&f);
        prop_assert!(p.satisfies_siegenthaler());
        prop_assert!(p.satisfies_nonlinearity_bound());
        if p.resiliency_order >= 0 {
            for a in best_affine_approximations(&f, f.n() as u32) {
                if a.walsh != 0 {
                    prop_assert!(a.mask.weight() as i32 > p.resiliency_order);
                }
            }
        }
    }
}

#[test]
fn constant_zero_spectrum() {
    let w = walsh_transform(&TruthTable::zero(3).unwrap());
    assert_eq!(w, vec![8, 0, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn parse_examples() {
    let bits = |t: &TruthTable| (0..t.len()).map(|x| t.get(x) as u8).collect::<Vec<_>>();
    assert_eq!(bits(&parse_anf("x_0", 2).unwrap()), [0, 1, 0, 1]);
    assert_eq!(bits(&parse_anf("x_0x_1 + x_0", 2).unwrap()), [0, 1, 0, 0]);
    assert_eq!(parse_anf("x_{1} * x2 + 1", 3).unwrap(), parse_anf("1 + x_1x_2", 3).unwrap());
    assert!(parse_anf("x_5", 3).is_err());
    assert!(parse_anf("x_0 + + y", 3).is_err());
}

#[test]
fn f_and_g_profiles() {
    let f = profile(&achterbahn128_combiner());
    assert_eq!(
        (f.balanced, f.algebraic_degree, f.resiliency_order, f.nonlinearity, f.algebraic_immunity),
        (true, 4, 8, 3584, 4)
    );
    let g = profile(&achterbahn80_combiner());
    assert_eq!(
        (g.balanced, g.algebraic_degree, g.resiliency_order, g.nonlinearity, g.algebraic_immunity),
        (true, 4, 6, 896, 4)
    );
}

#[test]
fn projection_profile() {
    let p = profile(&parse_anf("x_0", 13).unwrap());
    assert_eq!(
        (p.balanced, p.algebraic_degree, p.resiliency_order, p.nonlinearity, p.algebraic_immunity),
        (true, 1, 0, 0, 1)
    );
}

#[test]
fn published_masks_are_among_the_best() {
    let f = achterbahn128_combiner();
    let lf = LinearMask::from_vars(13, &[0, 1, 2, 3, 4, 7, 8, 9, 10]).unwrap();
    assert_eq!(walsh_transform(&f)[lf.mask as usize], 1024);
    let best = best_affine_approximations(&f, 9);
    assert_eq!(best[0].walsh.abs(), 1024);
    assert!(best.iter().take_while(|a| a.walsh.abs() == 1024).any(|a| a.mask == lf));

    let g = achterbahn80_combiner();
    let lg = LinearMask::from_vars(11, &[0, 2, 3, 4, 5, 6, 9]).unwrap();
    assert_eq!(walsh_transform(&g)[lg.mask as usize], -256);
    let best = best_affine_approximations(&g, 7);
    assert_eq!(best[0].walsh.abs(), 256);
    assert!(best.iter().take_while(|a| a.walsh.abs() == 256).any(|a| a.mask == lg));
}

#[test]
fn weight_zero_search_is_the_constant() {
    let f = parse_anf("x_0x_1 + x_2", 3).unwrap();
    let best = best_affine_approximations(&f, 0);
    assert_eq!(best.len(), 1);
    assert_eq!(best[0].mask.mask, 0);
    assert_eq!(best[0].bias.epsilon, 0.0);
}

#[test]
fn restriction_examples() {
    let f = parse_anf("x_0x_1", 2).unwrap();
    let g = restrict(&f, &BTreeMap::from([(0, true)])).unwrap();
    assert_eq!(g, parse_anf("x_0", 1).unwrap());
    assert_eq!(restrict(&f, &BTreeMap::new()).unwrap(), f);
    assert!(restrict(&f, &BTreeMap::from([(2, true)])).is_err());
}
