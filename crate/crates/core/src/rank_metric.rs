//! Rank weight, support and the vector-to-matrix expansion.

use crate::field::{ExtElem, FieldContext};
use crate::matrix::{self, MatGFq, Matrix};
use crate::subspace::Subspace;

/// The `m x n` matrix whose column `j` holds the coordinates of `v[j]`.
pub fn expand(ctx: &FieldContext, v: &[ExtElem]) -> MatGFq {
    let cols: Vec<Vec<u64>> = v.iter().map(|x| ctx.to_coords(x)).collect();
    Matrix::from_fn(ctx.degree(), v.len(), |i, j| cols[j][i])
}

/// Inverse of [`expand`].
pub fn collapse(ctx: &FieldContext, m: &MatGFq) -> Vec<ExtElem> {
    (0..m.cols())
        .map(|j| ctx.coords_to_elem(&m.column(j)))
        .collect()
}

pub fn rank_weight(ctx: &FieldContext, v: &[ExtElem]) -> usize {
    matrix::rank(ctx.base(), &expand(ctx, v))
}

/// The GF(q)-span of the coordinates of `v`.
pub fn support(ctx: &FieldContext, v: &[ExtElem]) -> Subspace {
    Subspace::span(ctx, v)
}

/// Rank distance `rank_weight(x - y)`.
pub fn distance(ctx: &FieldContext, x: &[ExtElem], y: &[ExtElem]) -> usize {
    assert_eq!(x.len(), y.len(), "vectors must have equal length");
    let diff: Vec<ExtElem> = x.iter().zip(y).map(|(a, b)| ctx.sub(a, b)).collect();
    rank_weight(ctx, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BaseField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn sample_vec(ctx: &FieldContext, n: usize, rng: &mut ChaCha20Rng) -> Vec<ExtElem> {
        (0..n).map(|_| ctx.sample(rng)).collect()
    }

    #[test]
    fn expansion() {
        let ctx = FieldContext::with_order(4, 5).unwrap();
        let zero = vec![ctx.zero(); 3];
        assert_eq!(expand(&ctx, &zero), MatGFq::zeros(5, 3));
        let basis = ctx.beta().to_vec();
        let m = expand(&ctx, &basis[..2]);
        assert_eq!(m, Matrix::from_fn(5, 2, |i, j| u64::from(i == j)));
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let v = sample_vec(&ctx, 7, &mut rng);
        assert_eq!(collapse(&ctx, &expand(&ctx, &v)), v);
    }

    #[test]
    fn small_weights() {
        let ctx = FieldContext::with_order(2, 6).unwrap();
        assert_eq!(rank_weight(&ctx, &vec![ctx.zero(); 4]), 0);
        let c = ctx.generator();
        assert_eq!(rank_weight(&ctx, &[c.clone(), c.clone(), c.clone()]), 1);
        let sup = support(&ctx, &[c.clone(), c.clone(), c.clone()]);
        assert_eq!(sup, Subspace::span(&ctx, &[c]));
        assert!(support(&ctx, &[ctx.zero()]).is_zero());
    }

    /// Rank from the number of distinct GF(q)-combinations of the
    /// coordinates, which is q^rank.
    fn brute_force_rank(ctx: &FieldContext, v: &[ExtElem]) -> usize {
        let q = ctx.q();
        let n = v.len();
        let mut seen = std::collections::HashSet::new();
        let mut coeffs = vec![0u64; n];
        loop {
            let mut acc = ctx.zero();
            for (c, x) in coeffs.iter().zip(v) {
                ctx.add_scaled(&mut acc, *c, x);
            }
            seen.insert(acc);
            let mut i = 0;
            while i < n {
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        (seen.len() as f64).log(q as f64).round() as usize
    }

    #[test]
    fn weight_matches_brute_force_span() {
        let ctx = FieldContext::with_order(4, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..300 {
            let v = sample_vec(&ctx, 3, &mut rng);
            let w = rank_weight(&ctx, &v);
            assert!(w <= 3);
            assert_eq!(w, brute_force_rank(&ctx, &v));
        }
    }

    #[test]
    fn support_contains_coordinates() {
        let ctx = FieldContext::with_order(16, 8).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let v = sample_vec(&ctx, n, &mut rng);
            let s = support(&ctx, &v);
            assert_eq!(s.dim(), rank_weight(&ctx, &v));
            assert!(v.iter().all(|x| s.contains(&ctx, x)));
        }
    }

    #[test]
    fn isometry_invariance() {
        let ctx = FieldContext::with_order(8, 6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let v = sample_vec(&ctx, 5, &mut rng);
            let p = matrix::sample_invertible(ctx.base(), 5, &mut rng);
            let vp = matrix::vec_mul_base(&ctx, &v, &p);
            assert_eq!(rank_weight(&ctx, &vp), rank_weight(&ctx, &v));
        }
    }

    #[test]
    fn basis_independence() {
        let plain = FieldContext::new(BaseField::binary(2).unwrap(), 5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let beta = loop {
            let cand: Vec<_> = (0..5).map(|_| plain.sample(&mut rng)).collect();
            if let Ok(ctx) = plain.clone().with_basis(cand.clone()) {
                break ctx;
            }
        };
        for _ in 0..300 {
            let v = sample_vec(&plain, 4, &mut rng);
            assert_eq!(rank_weight(&plain, &v), rank_weight(&beta, &v));
        }
    }

    #[test]
    fn triangle_inequality() {
        let ctx = FieldContext::with_order(2, 7).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for _ in 0..500 {
            let x = sample_vec(&ctx, 4, &mut rng);
            let y = sample_vec(&ctx, 4, &mut rng);
            let z = sample_vec(&ctx, 4, &mut rng);
            assert!(distance(&ctx, &x, &z) <= distance(&ctx, &x, &y) + distance(&ctx, &y, &z));
            assert_eq!(distance(&ctx, &x, &x), 0);
        }
    }
}
