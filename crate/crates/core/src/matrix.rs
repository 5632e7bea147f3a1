//! Dense matrices over GF(q) and GF(q^m): row reduction, rank, solving,
//! inversion and sampling of invertible matrices.

use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{BaseField, ExtElem, Field, FieldContext};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

/// Matrix over the base field GF(q).
pub type MatGFq = Matrix<u64>;
/// Matrix over the extension field GF(q^m).
pub type MatExt = Matrix<ExtElem>;

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, entries: Vec<E>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack needs equal row counts".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let start = range.start;
        Matrix::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)].clone())
    }

    /// The first `rows` rows.
    pub fn truncated(&self, rows: usize) -> Self {
        Matrix::from_fn(rows.min(self.rows), self.cols, |i, j| self[(i, j)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Matrix<u64> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, 0)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| u64::from(i == j))
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

/// Reduced row-echelon form with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<E> {
    pub reduced: Matrix<E>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination to the canonical RREF.
pub fn row_reduce<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut a = m.clone();
    let pivots = reduce_in_place(f, &mut a, m.cols);
    Echelon {
        rank: pivots.len(),
        reduced: a,
        pivots,
    }
}

/// Reduces `a` in place, only choosing pivots among the first `pivot_cols`
/// columns. Returns the pivot columns in order.
fn reduce_in_place<F: Field>(f: &F, a: &mut Matrix<F::Elem>, pivot_cols: usize) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !f.is_zero(&a[(i, col)])) else {
            continue;
        };
        a.swap_rows(rank, p);
        let inv = f.inv(&a[(rank, col)]).expect("pivot is nonzero");
        for j in col..cols {
            a[(rank, j)] = f.mul(&a[(rank, j)], &inv);
        }
        let pivot_row: Vec<F::Elem> = a.row(rank)[col..].to_vec();
        for i in 0..rows {
            if i == rank || f.is_zero(&a[(i, col)]) {
                continue;
            }
            let c = a[(i, col)].clone();
            for (k, pv) in pivot_row.iter().enumerate() {
                let j = col + k;
                a[(i, j)] = f.sub(&a[(i, j)], &f.mul(&c, pv));
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    row_reduce(f, m).rank
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(i, k)];
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] = f.add(&out[(i, j)], &f.mul(x, &b[(k, j)]));
            }
        }
    }
    Ok(out)
}

/// `M · v^T`.
pub fn mul_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(m.cols, v.len(), "matrix-vector dimension mismatch");
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
        })
        .collect()
}

/// One solution of `M · x^T = b`, with free variables set to zero.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if b.len() != m.rows {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let rhs = Matrix::new(b.len(), 1, b.to_vec())?;
    Ok(solve_many(f, m, &rhs)?.entries)
}

/// Solves `A · X = B` column by column (free variables zero).
pub fn solve_many<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    let mut aug = a.hstack(b)?;
    let pivots = reduce_in_place(f, &mut aug, a.cols);
    let rank = pivots.len();
    for i in rank..a.rows {
        if aug.row(i)[a.cols..].iter().any(|x| !f.is_zero(x)) {
            return Err(Error::NoSolution);
        }
    }
    let mut x = zeros(f, a.cols, b.cols);
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(pc, j)] = aug[(i, a.cols + j)].clone();
        }
    }
    Ok(x)
}

pub fn invert<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return Err(Error::Dimension("only square matrices are invertible".into()));
    }
    let n = m.rows;
    let mut aug = m.hstack(&identity(f, n))?;
    let pivots = reduce_in_place(f, &mut aug, n);
    if pivots.len() != n {
        return Err(Error::Singular);
    }
    Ok(aug.columns(n..2 * n))
}

pub fn random<F: Field, R: Rng + ?Sized>(
    f: &F,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, cols, |_, _| f.random(rng))
}

/// Uniform element of GL(dim) by rejection; also returns the number of
/// uniform matrices drawn.
pub fn sample_invertible_counted<F: Field, R: Rng + ?Sized>(
    f: &F,
    dim: usize,
    rng: &mut R,
) -> (Matrix<F::Elem>, usize) {
    let mut draws = 0;
    loop {
        draws += 1;
        let m = random(f, dim, dim, rng);
        if rank(f, &m) == dim {
            return (m, draws);
        }
    }
}

pub fn sample_invertible<F: Field, R: Rng + ?Sized>(
    f: &F,
    dim: usize,
    rng: &mut R,
) -> Matrix<F::Elem> {
    sample_invertible_counted(f, dim, rng).0
}

/// Product of an extension matrix with a base-field matrix.
pub fn mul_ext_base(ctx: &FieldContext, a: &MatExt, b: &MatGFq) -> Result<MatExt> {
    if a.cols != b.rows {
        return Err(Error::Dimension("mixed product shape".into()));
    }
    let mut out = zeros(ctx, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(i, k)];
            for j in 0..b.cols {
                let c = b[(k, j)];
                if c != 0 {
                    ctx.add_scaled(&mut out[(i, j)], c, x);
                }
            }
        }
    }
    Ok(out)
}

/// Row vector over GF(q^m) times a base-field matrix: `v · M`.
pub fn vec_mul_base(ctx: &FieldContext, v: &[ExtElem], m: &MatGFq) -> Vec<ExtElem> {
    assert_eq!(v.len(), m.rows, "vector-matrix dimension mismatch");
    (0..m.cols)
        .map(|j| {
            let mut acc = ctx.zero();
            for (i, x) in v.iter().enumerate() {
                ctx.add_scaled(&mut acc, m[(i, j)], x);
            }
            acc
        })
        .collect()
}

/// Convenience wrapper for the base field.
pub fn rank_gfq(f: &BaseField, m: &MatGFq) -> usize {
    rank(f, m)
}
