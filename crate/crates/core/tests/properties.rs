mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frobzeta::curve::{compute_all_bezout, compute_b_table};
use frobzeta::frobenius::{frobenius_matrix_with, FrobeniusOptions};
use frobzeta::ring::{charpoly_berkowitz, RingCtx, RingMatrix, RingPoly};
use frobzeta::zeta::charpoly_frobenius;

const PRIMES: [u64; 6] = [67, 101, 211, 307, 401, 499];

fn matrix(ctx: &RingCtx, m: usize, vals: &[u64]) -> RingMatrix {
    RingMatrix::from_vec(m, m, vals.iter().take(m * m).map(|&v| ctx.from_u64(v)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bezout_identity(seed in any::<u64>(), pi in 0usize..6, g in 1usize..=3, n in 1u32..=3) {
        let p = PRIMES[pi];
        prop_assume!((p as u128) > (2 * n as u128 - 1) * (2 * g as u128 + 1));
        let curve = random_curve(&mut ChaCha8Rng::seed_from_u64(seed), p, n, g);
        let ctx = curve.ctx_n1();
        let q = curve.q_poly(ctx);
        let dq = q.derivative(ctx);
        for pair in compute_all_bezout(&curve, ctx).unwrap() {
            prop_assert!(pair.r.coeffs.len() <= 2 * g && pair.s.coeffs.len() <= 2 * g + 1);
            let lhs = pair.r.mul(ctx, &q).add(ctx, &pair.s.mul(ctx, &dq)).trimmed();
            let mut xi = vec![ctx.zero(); pair.index + 1];
            xi[pair.index] = ctx.one();
            prop_assert_eq!(lhs, RingPoly::new(xi).trimmed());
        }
    }

    #[test]
    fn series_table_matches_oracle(seed in any::<u64>(), pi in 0usize..6, g in 1usize..=2, n in 1u32..=4) {
        let p = PRIMES[pi];
        prop_assume!((p as u128) > (2 * n as u128 - 1) * (2 * g as u128 + 1));
        let curve = random_curve(&mut ChaCha8Rng::seed_from_u64(seed), p, n, g);
        let table = compute_b_table(&curve);
        let want = series_coefficients(curve.ctx_n1(), &curve);
        prop_assert_eq!(table.b, want);
    }

    #[test]
    fn cayley_hamilton(vals in prop::collection::vec(0u64..1_000_000, 36), m in 1usize..=6, e in 1u32..=4) {
        let ctx = RingCtx::new(10007, e).unwrap();
        let a = matrix(&ctx, m, &vals);
        let cp = charpoly_berkowitz(&ctx, &a).unwrap();
        prop_assert_eq!(cp.coeffs.len(), m + 1);
        let mut acc = RingMatrix::zeros(&ctx, m, m);
        for c in cp.coeffs.iter().rev() {
            acc = acc.mul(&ctx, &a).unwrap().add(&ctx, &RingMatrix::identity(&ctx, m).scale(&ctx, c)).unwrap();
        }
        prop_assert_eq!(acc, RingMatrix::zeros(&ctx, m, m));
    }

    #[test]
    fn matrix_product_associative(vals in prop::collection::vec(0u64..u64::MAX, 75), m in 1usize..=5) {
        let ctx = RingCtx::new(1009, 3).unwrap();
        let (a, b, c) = (matrix(&ctx, m, &vals), matrix(&ctx, m, &vals[25..]), matrix(&ctx, m, &vals[50..]));
        let left = a.mul(&ctx, &b).unwrap().mul(&ctx, &c).unwrap();
        let right = a.mul(&ctx, &b.mul(&ctx, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn frobenius_charpoly_satisfies_functional_equation(seed in any::<u64>(), pi in 0usize..6, g in 1usize..=2, n in 1u32..=3) {
        let p = PRIMES[pi];
        prop_assume!((p as u128) > (2 * n as u128 - 1) * (2 * g as u128 + 1));
        let curve = random_curve(&mut ChaCha8Rng::seed_from_u64(seed), p, n, g);
        let m = frobenius_matrix_with(&curve, FrobeniusOptions::default()).unwrap();
        let cp = charpoly_frobenius(curve.ctx_n(), &m).unwrap();
        prop_assert!(cp.functional_equation_holds(curve.ctx_n()));
        // the determinant of Frobenius is p^g
        let pg = curve.ctx_n().pow(&curve.ctx_n().from_u64(p), g as u64);
        prop_assert_eq!(cp.a(2 * g), &pg);
    }
}
