//! Randomized invariants.

mod common;

use std::sync::Arc;

use common::*;
use mfsing_core::koszul::new_koszul;
use mfsing_core::mf::{hom_diff, new_mf, GradedHom};
use mfsing_core::poly::{groebner_ideal, parse_poly, solve_linear, Scalar};
use mfsing_core::{Error, Field, Limits, Parity, Poly, PolyMatrix, RingCtx};
use proptest::prelude::*;

fn ring() -> Arc<RingCtx> {
    RingCtx::rational(&["x", "y"])
}

fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5), 0..=max_terms).prop_map(|terms| {
        let ctx = ring();
        Poly::from_terms(&ctx, terms.into_iter().map(|(a, b, c)| (vec![a, b], Scalar::from_integer(c.into()))))
    })
}

fn nonzero_poly(max_deg: u32) -> impl Strategy<Value = Poly> {
    arb_poly(max_deg, 3).prop_filter("nonzero", |p| !p.is_zero())
}

fn x_poly(max_deg: u32) -> impl Strategy<Value = Vec<(u32, i64)>> {
    prop::collection::vec((0..=max_deg, -4i64..=4), 1..=3)
        .prop_filter("nonzero", |t| {
            let mut sums = std::collections::BTreeMap::new();
            for &(e, c) in t {
                *sums.entry(e).or_insert(0) += c;
            }
            sums.values().any(|&c| c != 0)
        })
}

fn poly_in_x(ctx: &Arc<RingCtx>, terms: &[(u32, i64)]) -> Poly {
    Poly::from_terms(ctx, terms.iter().map(|&(e, c)| (vec![e], Scalar::from_integer(c.into()))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in arb_poly(3, 4), q in arb_poly(3, 4), r in arb_poly(3, 4)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn parse_print_round_trip(p in arb_poly(4, 5)) {
        let printed = p.to_string();
        let reparsed = parse_poly(&printed, p.ctx()).unwrap();
        prop_assert_eq!(&reparsed, &p);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn normal_forms_are_canonical(g1 in nonzero_poly(3), g2 in nonzero_poly(3), p in arb_poly(3, 4), a in arb_poly(2, 2), b in arb_poly(2, 2)) {
        let ctx = ring();
        let gb = match groebner_ideal(&[g1.clone(), g2.clone()], &ctx, &Limits::default()) {
            Ok(gb) => gb,
            Err(Error::ResourceCap(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(gb.reduce_poly(&g1).unwrap().is_zero());
        prop_assert!(gb.reduce_poly(&g2).unwrap().is_zero());
        let shifted = &(&p + &(&a * &g1)) + &(&b * &g2);
        prop_assert_eq!(gb.reduce_poly(&shifted).unwrap(), gb.reduce_poly(&p).unwrap());
    }

    #[test]
    fn solve_linear_is_sound(entries in prop::collection::vec(arb_poly(2, 2), 6), x in prop::collection::vec(arb_poly(2, 2), 3)) {
        let ctx = ring();
        let m = PolyMatrix::from_rows(&ctx, vec![entries[..3].to_vec(), entries[3..].to_vec()], 3).unwrap();
        let b = m.mul_vec(&x).unwrap();
        let sol = solve_linear(&m, &b, &Limits::default());
        if let Err(Error::ResourceCap(_)) = sol {
            return Ok(());
        }
        let sol = sol.unwrap();
        prop_assert!(sol.is_some());
        prop_assert_eq!(m.mul_vec(&sol.unwrap()).unwrap(), b);
    }

    #[test]
    fn prime_field_inverses(p in prop::sample::select(vec![3u32, 5, 7, 101, 65521]), a in 1i64..100000) {
        let f = Field::prime(p).unwrap();
        let x = f.from_int(a);
        prop_assume!(!num_traits::Zero::is_zero(&x));
        prop_assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
    }

    #[test]
    fn corrupted_factorizations_are_rejected(n in 2u32..=6, a in 0u32..=6, which in 0usize..2, noise in x_poly(6)) {
        let a = a.min(n);
        let e = monomial_mf("x", n, a);
        let noise = poly_in_x(e.ctx(), &noise);
        let (mut d0, mut d1) = (e.d0().clone(), e.d1().clone());
        let target = if which == 0 { &mut d0 } else { &mut d1 };
        let entry = target.get(0, 0) + &noise;
        target.set(0, 0, entry);
        match new_mf(e.lg(), d0, d1) {
            Err(Error::IdentityViolation { row: 0, col: 0, .. }) => {}
            other => prop_assert!(false, "expected a violation, got {:?}", other.map(|m| m.d0().to_string())),
        }
    }

    #[test]
    fn corrupted_koszul_modules_are_rejected(n in 2u32..=5, noise in x_poly(5), on_h in any::<bool>()) {
        let m = k_rep("x", n);
        let noise = poly_in_x(m.ctx(), &noise);
        let mut d = m.d_maps().to_vec();
        let mut h = m.h_maps().to_vec();
        let target = if on_h { &mut h[0] } else { &mut d[0] };
        let entry = target.get(0, 0) + &noise;
        target.set(0, 0, entry);
        prop_assert!(new_koszul(m.lg(), m.lo(), m.ranks().to_vec(), d, h).is_err());
    }

    #[test]
    fn hom_differential_squares_to_zero(n in 2u32..=5, a in 0u32..=5, c in 0u32..=5, t0 in x_poly(4), t1 in x_poly(4), odd in any::<bool>()) {
        let e = monomial_mf("x", n, a.min(n));
        let f = monomial_mf("x", n, c.min(n));
        let ctx = e.ctx().clone();
        let m0 = PolyMatrix::scalar(&ctx, 1, &poly_in_x(&ctx, &t0));
        let m1 = PolyMatrix::scalar(&ctx, 1, &poly_in_x(&ctx, &t1));
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let t = GradedHom::new(&e, &f, parity, m0, m1).unwrap();
        prop_assert!(hom_diff(&hom_diff(&t).unwrap()).unwrap().is_zero());
    }
}
