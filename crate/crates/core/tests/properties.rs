mod common;

use blockcoh::cohomology::factor::{bott_forms, clear_cache, quadric_line, spinor_twist};
use blockcoh::cohomology::{euler_char, tensor_cohomology};
use blockcoh::criteria::{spi_check, tpq_check, ScanOptions};
use blockcoh::dsl::parse;
use blockcoh::regularity::{block_product, is_regular, min_balanced_reg};
use blockcoh::{cohomology, BundleExpr, FactorBundle, PsiRanks, SpinorKind};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn dims_as_bigint(t: &blockcoh::CohomTable) -> Vec<BigInt> {
    t.dims().iter().map(|v| BigInt::from(v.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serre_duality(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_space(&mut r, 6);
        let e = random_bundle(&mut r, &s, -6, 6);
        let h = cohomology(&e, &s).unwrap();
        let dual = e.dual(&s).unwrap().twist_by(&s.canonical_twists());
        prop_assert_eq!(h, cohomology(&dual, &s).unwrap().reversed());
    }

    #[test]
    fn chi_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random_space(&mut r, 3), random_space(&mut r, 3));
        let (a, b) = (random_bundle(&mut r, &x, -5, 5), random_bundle(&mut r, &y, -5, 5));
        let xy = x.product(&y);
        let ab = a.box_product(&b);
        prop_assert_eq!(euler_char(&ab, &xy).unwrap(), euler_char(&a, &x).unwrap() * euler_char(&b, &y).unwrap());
        prop_assert_eq!(cohomology(&ab, &xy).unwrap(), cohomology(&a, &x).unwrap().kunneth(&cohomology(&b, &y).unwrap()));
    }

    #[test]
    fn dual_is_an_involution_and_keeps_rank(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_space(&mut r, 6);
        let e = random_bundle(&mut r, &s, -6, 6);
        let d = e.dual(&s).unwrap();
        prop_assert_eq!(d.dual(&s).unwrap(), e.clone());
        let psi = PsiRanks::new();
        prop_assert_eq!(d.rank(&s, &psi).unwrap(), e.rank(&s, &psi).unwrap());
    }

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_space(&mut r, 6);
        let e = random_bundle(&mut r, &s, -6, 6);
        let text = e.to_string();
        let back = parse(&text, &s).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn restriction_keeps_rank(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_space(&mut r, 6);
        let terms = (0..2).map(|_| blockcoh::Term::single(s.factors().iter().map(|&f| random_slot(&mut r, f, -4, 4, false)).collect())).collect();
        let e = BundleExpr::new(terms, &s).unwrap();
        let psi = PsiRanks::new();
        for i in 0..s.len() {
            match e.restrict_hyperplane(&s, i) {
                Ok((re, sub)) => prop_assert_eq!(re.rank(&sub, &psi).unwrap(), e.rank(&s, &psi).unwrap()),
                Err(_) => prop_assert!((s.factor(i).dim == 2 && s.factor(i).is_quadric()) || (s.len() == 1 && s.factor(i).dim == 1)),
            }
        }
    }

    #[test]
    fn min_reg_translation_and_monotonicity(seed in any::<u64>(), shift in -3i64..=3) {
        let mut r = rng(seed);
        let s = random_space(&mut r, 5);
        let e = random_bundle(&mut r, &s, -3, 3);
        let t = min_balanced_reg(&e, &s).unwrap();
        prop_assert_eq!(min_balanced_reg(&e.twist_balanced(shift), &s).unwrap(), t - shift);
        prop_assert!(is_regular(&e, &s, &vec![t; s.len()]).unwrap().is_regular());
        prop_assert!(is_regular(&e, &s, &vec![t + 1; s.len()]).unwrap().is_regular());
        prop_assert!(!is_regular(&e, &s, &vec![t - 1; s.len()]).unwrap().is_regular());
    }
}

#[test]
fn projective_lines_match_bott() {
    for n in 1..=4u32 {
        let s = sp(&format!("P{n}"));
        for t in -10..=10 {
            let e = BundleExpr::line(&[t], &s).unwrap();
            assert_eq!(dims_as_bigint(&cohomology(&e, &s).unwrap()), oracle_proj_line(n as i64, t), "P{n} O({t})");
        }
    }
}

#[test]
fn quadric_lines_match_hypersurface_sequence() {
    for m in 2..=6u32 {
        for t in -12..=12 {
            assert_eq!(dims_as_bigint(&quadric_line(m, t)), oracle_quadric_line(m as i64, t), "Q{m} O({t})");
        }
    }
}

#[test]
fn forms_euler_characteristic() {
    for n in 1..=5u32 {
        for p in 0..=n {
            for t in -9..=9 {
                assert_eq!(bott_forms(n, p, t).euler_char(), oracle_chi_forms(n as i64, p as i64, t), "Ω^{p}({t}) on P{n}");
            }
        }
    }
}

#[test]
fn q2_matches_p1_x_p1() {
    // Σ_1(t) ↔ O(t, t+1), Σ_2(t) ↔ O(t+1, t), O(a) ↔ O(a, a)
    let q2 = sp("Q2");
    let pp = sp("P1xP1");
    for t in -8..=8 {
        let cases = [
            (FactorBundle::Spinor(SpinorKind::S1, t), [t, t + 1]),
            (FactorBundle::Spinor(SpinorKind::S2, t), [t + 1, t]),
            (FactorBundle::Line(t), [t, t]),
        ];
        for (b, tw) in cases {
            let lhs = cohomology(&BundleExpr::single(vec![b], &q2).unwrap(), &q2).unwrap();
            let rhs = cohomology(&BundleExpr::line(&tw, &pp).unwrap(), &pp).unwrap();
            assert_eq!(lhs, rhs, "{b:?}");
        }
    }
}

#[test]
fn spinor_sections_count() {
    // h^0(Σ) = 2^{⌊(m+1)/2⌋}: the width of the defining sequence
    for m in 2..=9u32 {
        for k in SpinorKind::all_on(m) {
            let h0 = spinor_twist(m, k, 0).unwrap().h(0);
            assert_eq!(h0, num_bigint::BigUint::from(1u64 << m.div_ceil(2)), "Q{m}");
        }
    }
}

#[test]
fn psi_ranks_from_gram_matrix() {
    // ranks of ψ^∨_1, ψ^∨_2 on Q_3
    assert_eq!(dual_ranks_by_gram(3), vec![4, 7]);
    let q4 = dual_ranks_by_gram(4);
    assert_eq!(q4[0], 5);
}

#[test]
fn witnesses_reproduce_from_a_cold_cache() {
    let mut r = rng(7);
    let s = sp("P1xQ3");
    for _ in 0..20 {
        let e = random_bundle(&mut r, &s, -2, 2);
        let Ok(rep) = tpq_check(&e, &s, &ScanOptions::default()) else { continue };
        let Some(w) = rep.witness else { continue };
        clear_cache();
        let k: Vec<usize> = w.index_vector.iter().map(|&x| x as usize).collect();
        let block = block_product(&s, &k).unwrap();
        let h = tensor_cohomology(&e.twist_balanced(w.t.unwrap()), &block, &s).unwrap().h(w.i as i64);
        assert_eq!(h.to_string(), w.dim);
        assert!(w.dim != "0");
    }
}

#[test]
fn doubling_the_window_keeps_verdicts() {
    let mut r = rng(11);
    let s = sp("P1xQ3");
    let wide = ScanOptions { window_scale: 2, ..Default::default() };
    for _ in 0..12 {
        let e = random_bundle(&mut r, &s, -2, 2);
        let (a, b) = (tpq_check(&e, &s, &ScanOptions::default()).unwrap(), tpq_check(&e, &s, &wide).unwrap());
        assert_eq!((a.verdict, a.certificate), (b.verdict, b.certificate));
        let (a, b) = (spi_check(&e, &s, &ScanOptions::default()).unwrap(), spi_check(&e, &s, &wide).unwrap());
        assert_eq!((a.verdict, a.certificate), (b.verdict, b.certificate));
    }
}
