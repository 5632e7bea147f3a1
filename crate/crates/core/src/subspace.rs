//! GF(q)-subspaces of GF(q^m), stored as canonical RREF coordinate rows.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtElem, FieldContext};
use crate::matrix::{self, MatGFq, Matrix};

/// A subspace of GF(q^m) over GF(q). Equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    /// Reduced row-echelon basis in β-coordinates, `dim x m`.
    basis: MatGFq,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(m: usize) -> Self {
        Subspace {
            basis: MatGFq::zeros(0, m),
            pivots: Vec::new(),
        }
    }

    /// The whole field GF(q^m).
    pub fn full(m: usize) -> Self {
        Subspace {
            basis: MatGFq::identity(m),
            pivots: (0..m).collect(),
        }
    }

    /// Span of coordinate rows (any number, possibly dependent).
    pub fn from_coord_rows(ctx: &FieldContext, rows: &MatGFq) -> Self {
        assert_eq!(rows.cols(), ctx.degree(), "coordinate rows must have m entries");
        let ech = matrix::row_reduce(ctx.base(), rows);
        Subspace {
            basis: ech.reduced.truncated(ech.rank),
            pivots: ech.pivots,
        }
    }

    pub fn span(ctx: &FieldContext, elems: &[ExtElem]) -> Self {
        Self::from_coord_rows(ctx, &coord_rows(ctx, elems))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis in coordinates.
    pub fn coords(&self) -> &MatGFq {
        &self.basis
    }

    /// Canonical basis as field elements.
    pub fn basis(&self, ctx: &FieldContext) -> Vec<ExtElem> {
        (0..self.dim())
            .map(|i| ctx.coords_to_elem(self.basis.row(i)))
            .collect()
    }

    /// Residue of a coordinate vector after reduction by the basis.
    fn residue(&self, ctx: &FieldContext, mut v: Vec<u64>) -> Vec<u64> {
        let base = ctx.base();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = v[p];
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = base.sub(*x, base.mul(c, b));
                }
            }
        }
        v
    }

    pub fn contains(&self, ctx: &FieldContext, x: &ExtElem) -> bool {
        self.residue(ctx, ctx.to_coords(x)).iter().all(|&c| c == 0)
    }

    pub fn is_subspace_of(&self, ctx: &FieldContext, other: &Subspace) -> bool {
        (0..self.dim()).all(|i| {
            other
                .residue(ctx, self.basis.row(i).to_vec())
                .iter()
                .all(|&c| c == 0)
        })
    }

    pub fn sum(&self, ctx: &FieldContext, other: &Subspace) -> Subspace {
        let rows = stack(&self.basis, &other.basis);
        Self::from_coord_rows(ctx, &rows)
    }

    /// Intersection by the Zassenhaus sum-and-intersect reduction.
    pub fn intersect(&self, ctx: &FieldContext, other: &Subspace) -> Subspace {
        let m = self.ambient_dim();
        let (da, db) = (self.dim(), other.dim());
        let block = Matrix::from_fn(da + db, 2 * m, |i, j| match (i < da, j < m) {
            (true, true) => self.basis[(i, j)],
            (true, false) => self.basis[(i, j - m)],
            (false, true) => other.basis[(i - da, j)],
            (false, false) => 0,
        });
        let ech = matrix::row_reduce(ctx.base(), &block);
        let sum_dim = ech.pivots.iter().filter(|&&p| p < m).count();
        let rows = Matrix::from_fn(ech.rank - sum_dim, m, |i, j| ech.reduced[(sum_dim + i, m + j)]);
        Self::from_coord_rows(ctx, &rows)
    }

    /// Span of all products `a * b` with `a` in `self` and `b` in `other`.
    pub fn product(&self, ctx: &FieldContext, other: &Subspace) -> Subspace {
        let left = self.basis(ctx);
        let right = other.basis(ctx);
        let products: Vec<ExtElem> = left
            .iter()
            .flat_map(|a| right.iter().map(move |b| ctx.mul(a, b)))
            .collect();
        Self::span(ctx, &products)
    }

    /// `{x * s : s in self}`.
    pub fn scale(&self, ctx: &FieldContext, x: &ExtElem) -> Result<Subspace> {
        if x.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let images: Vec<ExtElem> = self.basis(ctx).iter().map(|b| ctx.mul(x, b)).collect();
        Ok(Self::span(ctx, &images))
    }

    /// `{x^-1 * s : s in self}`.
    pub fn scale_inv(&self, ctx: &FieldContext, x: &ExtElem) -> Result<Subspace> {
        let inv = ctx.inv(x).map_err(|_| Error::ZeroScalar)?;
        self.scale(ctx, &inv)
    }

    /// Every element of the subspace, in the order of coefficient vectors
    /// over the canonical basis. Toy sizes only.
    pub fn elements(&self, ctx: &FieldContext) -> Vec<ExtElem> {
        let q = ctx.q();
        let basis = self.basis(ctx);
        let count = (q as usize).pow(self.dim() as u32);
        let mut coeffs = vec![0u64; self.dim()];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut x = ctx.zero();
            for (c, b) in coeffs.iter().zip(&basis) {
                ctx.add_scaled(&mut x, *c, b);
            }
            out.push(x);
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
        out
    }

    /// Uniform random element of the subspace.
    pub fn sample_element<R: Rng + ?Sized>(&self, ctx: &FieldContext, rng: &mut R) -> ExtElem {
        let mut x = ctx.zero();
        for i in 0..self.dim() {
            let c = ctx.base().random(rng);
            let b = ctx.coords_to_elem(self.basis.row(i));
            ctx.add_scaled(&mut x, c, &b);
        }
        x
    }

    /// Uniform subspace of dimension `dim`.
    pub fn sample<R: Rng + ?Sized>(ctx: &FieldContext, dim: usize, rng: &mut R) -> Result<Subspace> {
        Subspace::zero(ctx.degree()).sample_superspace(ctx, dim, rng)
    }

    /// Uniform subspace of dimension `dim` containing `self`, built by
    /// adjoining uniform vectors and rejecting dependent ones.
    pub fn sample_superspace<R: Rng + ?Sized>(
        &self,
        ctx: &FieldContext,
        dim: usize,
        rng: &mut R,
    ) -> Result<Subspace> {
        if dim < self.dim() || dim > ctx.degree() {
            return Err(Error::Dimension(format!(
                "cannot extend a {}-dimensional subspace to dimension {dim} in GF(q^{})",
                self.dim(),
                ctx.degree()
            )));
        }
        let mut current = self.clone();
        while current.dim() < dim {
            let v = ctx.sample(rng);
            if !current.contains(ctx, &v) {
                current = current.sum(ctx, &Self::span(ctx, &[v]));
            }
        }
        Ok(current)
    }

    /// `n` coordinates drawn independently and uniformly from the subspace.
    pub fn sample_vector<R: Rng + ?Sized>(
        &self,
        ctx: &FieldContext,
        n: usize,
        rng: &mut R,
    ) -> Vec<ExtElem> {
        (0..n).map(|_| self.sample_element(ctx, rng)).collect()
    }
}

fn stack(a: &MatGFq, b: &MatGFq) -> MatGFq {
    Matrix::from_fn(a.rows() + b.rows(), a.cols(), |i, j| {
        if i < a.rows() {
            a[(i, j)]
        } else {
            b[(i - a.rows(), j)]
        }
    })
}

/// Coordinates of `elems` as the rows of a matrix.
pub fn coord_rows(ctx: &FieldContext, elems: &[ExtElem]) -> MatGFq {
    let m = ctx.degree();
    let entries = elems.iter().flat_map(|x| ctx.to_coords(x)).collect();
    Matrix::new(elems.len(), m, entries).expect("each element has m coordinates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashMap;

    fn ctx(q: u64, m: usize) -> FieldContext {
        FieldContext::with_order(q, m).unwrap()
    }

    #[test]
    fn trivial_products() {
        let f = ctx(4, 6);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let b = Subspace::sample(&f, 3, &mut rng).unwrap();
        let one = Subspace::span(&f, &[f.one()]);
        assert_eq!(one.product(&f, &b), b);
        assert!(Subspace::zero(6).product(&f, &b).is_zero());
    }

    #[test]
    fn product_dimension_matches_span_rank() {
        let f = ctx(2, 8);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let mut full = 0;
        let trials = 500;
        for _ in 0..trials {
            let a = Subspace::sample(&f, 2, &mut rng).unwrap();
            let b = Subspace::sample(&f, 3, &mut rng).unwrap();
            let prod = a.product(&f, &b);
            // Independent oracle: rank of the explicit list of products.
            let elems: Vec<_> = a
                .elements(&f)
                .iter()
                .flat_map(|x| b.elements(&f).into_iter().map(move |y| (x.clone(), y)))
                .map(|(x, y)| f.mul(&x, &y))
                .collect();
            assert_eq!(prod.dim(), matrix::rank(f.base(), &coord_rows(&f, &elems)));
            assert!(prod.dim() <= 6);
            full += usize::from(prod.dim() == 6);
        }
        // Rank deficiency has probability at most q^6 / ((q - 1) q^8) = 1/4.
        assert!(full as f64 / trials as f64 >= 0.75 - 0.06);
    }

    #[test]
    fn scaling() {
        let f = ctx(16, 5);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let s = Subspace::sample(&f, 3, &mut rng).unwrap();
        assert_eq!(s.scale_inv(&f, &f.one()).unwrap(), s);
        assert_eq!(s.scale_inv(&f, &f.zero()), Err(Error::ZeroScalar));
        for _ in 0..200 {
            let x = loop {
                let x = f.sample(&mut rng);
                if !x.is_zero() {
                    break x;
                }
            };
            let xi = f.inv(&x).unwrap();
            let image = s.scale_inv(&f, &x).unwrap();
            assert_eq!(image.dim(), s.dim());
            assert_eq!(s.scale_inv(&f, &xi).unwrap().scale_inv(&f, &x).unwrap(), s);
            let y = f.sample(&mut rng);
            assert_eq!(image.contains(&f, &y), s.contains(&f, &f.mul(&x, &y)));
            let inside = image.sample_element(&f, &mut rng);
            assert!(s.contains(&f, &f.mul(&x, &inside)));
        }
    }

    #[test]
    fn intersection_dimension_formula() {
        let f = ctx(2, 8);
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..300 {
            let da = rng.gen_range(0..=8);
            let db = rng.gen_range(0..=8);
            let a = Subspace::sample(&f, da, &mut rng).unwrap();
            let b = Subspace::sample(&f, db, &mut rng).unwrap();
            let cap = a.intersect(&f, &b);
            let sum = a.sum(&f, &b);
            assert_eq!(a.dim() + b.dim(), sum.dim() + cap.dim());
            assert!(cap.is_subspace_of(&f, &a) && cap.is_subspace_of(&f, &b));
            assert_eq!(a.intersect(&f, &a), a);
            assert!(a.intersect(&f, &Subspace::zero(8)).is_zero());
        }
    }

    #[test]
    fn intersection_matches_element_sets() {
        let f = ctx(2, 6);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = Subspace::sample(&f, 4, &mut rng).unwrap();
            let b = Subspace::sample(&f, 3, &mut rng).unwrap();
            let cap = a.intersect(&f, &b);
            let both = a.elements(&f).into_iter().filter(|x| b.contains(&f, x)).count();
            assert_eq!(both, 1 << cap.dim());
        }
    }

    #[test]
    fn membership() {
        let f = ctx(2, 12);
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let a = Subspace::sample(&f, 5, &mut rng).unwrap();
        assert!(a.contains(&f, &f.zero()));
        for b in a.basis(&f) {
            assert!(a.contains(&f, &b));
        }
        let members: std::collections::HashSet<_> = a.elements(&f).into_iter().collect();
        assert_eq!(members.len(), 32);
        for _ in 0..2000 {
            let x = f.sample(&mut rng);
            assert_eq!(a.contains(&f, &x), members.contains(&x));
        }
    }

    #[test]
    fn superspace_sampling_is_uniform() {
        let f = ctx(2, 5);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let t = Subspace::sample(&f, 1, &mut rng).unwrap();
        assert_eq!(t.sample_superspace(&f, 1, &mut rng).unwrap(), t);
        let draws = 10_000;
        let mut counts: HashMap<Subspace, usize> = HashMap::new();
        for _ in 0..draws {
            let e = t.sample_superspace(&f, 2, &mut rng).unwrap();
            assert_eq!(e.dim(), 2);
            assert!(t.is_subspace_of(&f, &e));
            *counts.entry(e).or_default() += 1;
        }
        // (2^4 - 1) / (2 - 1) superspaces of dimension 2.
        assert_eq!(counts.len(), 15);
        let expected = draws as f64 / 15.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9% quantile of chi-square with 14 degrees of freedom.
        assert!(chi2 < 36.12, "chi2 = {chi2}");
    }

    #[test]
    fn vectors_in_subspace() {
        let f = ctx(16, 9);
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let zero = Subspace::zero(9);
        assert!(zero.sample_vector(&f, 4, &mut rng).iter().all(ExtElem::is_zero));
        let s = Subspace::sample(&f, 3, &mut rng).unwrap();
        let mut full_rank = 0;
        for _ in 0..500 {
            let v = s.sample_vector(&f, 10, &mut rng);
            assert!(v.iter().all(|x| s.contains(&f, x)));
            full_rank += usize::from(Subspace::span(&f, &v).dim() == 3);
        }
        assert!(full_rank >= 495);
    }

    proptest! {
        #[test]
        fn product_is_monotone(seed in any::<u64>()) {
            let f = ctx(4, 7);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let a = Subspace::sample(&f, 2, &mut rng).unwrap();
            let bigger = a.sample_superspace(&f, 3, &mut rng).unwrap();
            let b = Subspace::sample(&f, 2, &mut rng).unwrap();
            prop_assert!(a.product(&f, &b).is_subspace_of(&f, &bigger.product(&f, &b)));
        }

        #[test]
        fn canonical_form_is_basis_independent(seed in any::<u64>()) {
            let f = ctx(3, 6);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let s = Subspace::sample(&f, 3, &mut rng).unwrap();
            let shuffled: Vec<_> = (0..5).map(|_| s.sample_element(&f, &mut rng)).collect();
            let respan = Subspace::span(&f, &shuffled);
            if respan.dim() == 3 {
                prop_assert_eq!(respan, s);
            }
        }
    }
}
