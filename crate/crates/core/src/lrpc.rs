//! LRPC codes and their errors/erasures decoder.
//!
//! Every entry of the parity-check matrix lies in a small subspace
//! `F = <F_1, ..., F_d>`. Given a syndrome `s` and a known part `T` of the
//! error support, the decoder recovers the support `E` from
//! `S = <FT> + <s>` as `F_1^-1 S ∩ F_2^-1 S`, then solves a GF(q) linear
//! system whose matrix depends only on the F-coordinates of `H`.

use rand::Rng;

use crate::error::{Error, FailureFlags, Result};
use crate::field::{ExtElem, FieldContext};
use crate::matrix::{self, MatExt, MatGFq, Matrix};
use crate::params::CodeParams;
use crate::subspace::{coord_rows, Subspace};

/// Attempts allowed for each rejection-sampling step of code generation.
pub const GENERATION_ATTEMPTS: usize = 64;

/// Secret LRPC structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrpcCode {
    params: CodeParams,
    f_basis: Vec<ExtElem>,
    f_space: Subspace,
    h: MatExt,
    /// `h_coords[(a * n + i) * d + l]` is the `l`-th F-coordinate of `H[a][i]`.
    h_coords: Vec<u64>,
    formal_inv: MatGFq,
    f1_inv: ExtElem,
    f2_inv: ExtElem,
}

/// A successfully decoded error vector with its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub error: Vec<ExtElem>,
    pub support: Subspace,
}

/// Support and product space of a decodable syndrome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodableSupport {
    pub support: Subspace,
    pub product: Subspace,
}

impl LrpcCode {
    /// Samples `F` (with `F_1 = 1`) satisfying
    /// `dim(F_1^-1 F + F_2^-1 F) = 2d - 1`, then `H` with entries uniform in
    /// `F` until the formal matrix is invertible.
    pub fn generate<R: Rng + ?Sized>(
        ctx: &FieldContext,
        params: &CodeParams,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate_for_scheme()?;
        check_field(ctx, params)?;
        let f_basis = sample_f_basis(ctx, params.f_dim, rng)?;
        let (n, red, d) = (params.n, params.redundancy(), params.f_dim);
        for _ in 0..GENERATION_ATTEMPTS {
            let h_coords: Vec<u64> = (0..red * n * d).map(|_| ctx.base().random(rng)).collect();
            let h = assemble_h(ctx, &f_basis, &h_coords, red, n);
            match Self::build(ctx, params, f_basis.clone(), h, h_coords) {
                Ok(code) => return Ok(code),
                Err(Error::Singular) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::ResourceExhausted(GENERATION_ATTEMPTS))
    }

    /// Rebuilds a code from an F basis and a parity-check matrix, recomputing
    /// the F-coordinates of `H` and the inverse formal matrix. `d = 1` is
    /// accepted here.
    pub fn from_parts(
        ctx: &FieldContext,
        params: &CodeParams,
        f_basis: Vec<ExtElem>,
        h: MatExt,
    ) -> Result<Self> {
        params.validate()?;
        check_field(ctx, params)?;
        let (n, red, d) = (params.n, params.redundancy(), params.f_dim);
        if f_basis.len() != d || h.shape() != (red, n) {
            return Err(Error::Dimension("F basis or H has the wrong shape".into()));
        }
        if n != red * d {
            return Err(Error::InvalidParams("formal matrix must be square".into()));
        }
        if f_basis.len() >= 2 && f_basis[0] != ctx.one() {
            return Err(Error::InvalidKey("F_1 must be 1".into()));
        }
        let f_rows = coord_rows(ctx, &f_basis);
        if matrix::rank(ctx.base(), &f_rows) != d {
            return Err(Error::InvalidKey("F basis is dependent".into()));
        }
        if d >= 2 && !satisfies_f_condition(ctx, &f_basis) {
            return Err(Error::InvalidKey("F violates the decodability condition".into()));
        }
        // Express every entry of H over the F basis.
        let targets = coord_rows(ctx, h.entries()).transpose();
        let coeffs = matrix::solve_many(ctx.base(), &f_rows.transpose(), &targets)
            .map_err(|_| Error::InvalidKey("H has an entry outside F".into()))?;
        let h_coords: Vec<u64> = (0..red * n)
            .flat_map(|c| (0..d).map(move |l| (c, l)))
            .map(|(c, l)| coeffs[(l, c)])
            .collect();
        Self::build(ctx, params, f_basis, h, h_coords)
    }

    fn build(
        ctx: &FieldContext,
        params: &CodeParams,
        f_basis: Vec<ExtElem>,
        h: MatExt,
        h_coords: Vec<u64>,
    ) -> Result<Self> {
        let f_space = Subspace::span(ctx, &f_basis);
        let f1_inv = ctx.inv(&f_basis[0])?;
        let f2_inv = match f_basis.get(1) {
            Some(f2) => ctx.inv(f2)?,
            None => f1_inv.clone(),
        };
        let mut code = LrpcCode {
            params: *params,
            f_basis,
            f_space,
            h,
            h_coords,
            formal_inv: MatGFq::zeros(0, 0),
            f1_inv,
            f2_inv,
        };
        let formal = code.formal_matrix();
        code.formal_inv = matrix::invert(ctx.base(), &formal)?;
        Ok(code)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn f_basis(&self) -> &[ExtElem] {
        &self.f_basis
    }

    pub fn f_space(&self) -> &Subspace {
        &self.f_space
    }

    pub fn parity_check(&self) -> &MatExt {
        &self.h
    }

    fn h_coord(&self, a: usize, i: usize, l: usize) -> u64 {
        let (n, d) = (self.params.n, self.params.f_dim);
        self.h_coords[(a * n + i) * d + l]
    }

    /// The GF(q) matrix mapping error coordinates over an E basis to
    /// syndrome coordinates over the product basis `{F_l E_j}`.
    ///
    /// Row `(a, l, j)` sits at `a*d*r + l*r + j` and column `(i, j')` at
    /// `i*r + j'`; the entry is `[j == j'] * h_{a,i,l}`.
    pub fn formal_matrix(&self) -> MatGFq {
        let p = &self.params;
        let (n, red, d, r) = (p.n, p.redundancy(), p.f_dim, p.rank());
        let mut hf = MatGFq::zeros(red * d * r, n * r);
        for a in 0..red {
            for l in 0..d {
                for i in 0..n {
                    let c = self.h_coord(a, i, l);
                    if c == 0 {
                        continue;
                    }
                    for j in 0..r {
                        hf[(a * d * r + l * r + j, i * r + j)] = c;
                    }
                }
            }
        }
        hf
    }

    pub fn syndrome(&self, ctx: &FieldContext, e: &[ExtElem]) -> Vec<ExtElem> {
        matrix::mul_vec(ctx, &self.h, e)
    }

    /// Checks the three decodability conditions for `(T, s)` and returns
    /// the recovered support, or the flags of the failed conditions.
    pub fn check_decodable(
        &self,
        ctx: &FieldContext,
        erasure: &Subspace,
        syndrome: &[ExtElem],
    ) -> std::result::Result<DecodableSupport, FailureFlags> {
        let p = &self.params;
        let (d, r) = (p.f_dim, p.rank());
        let mut flags = FailureFlags::default();
        let ft = self.f_space.product(ctx, erasure);
        let s = ft.sum(ctx, &Subspace::span(ctx, syndrome));
        if s.dim() != r * d {
            flags.generation = true;
            return Err(flags);
        }
        let e = s
            .scale(ctx, &self.f1_inv)
            .and_then(|a| Ok(a.intersect(ctx, &s.scale(ctx, &self.f2_inv)?)))
            .expect("F basis elements are nonzero");
        if e.dim() != r || !erasure.is_subspace_of(ctx, &e) {
            flags.intersection = true;
            return Err(flags);
        }
        let fe = self.f_space.product(ctx, &e);
        if fe.dim() != d * e.dim() {
            flags.product_rank = true;
            return Err(flags);
        }
        if fe != s {
            flags.generation = true;
            return Err(flags);
        }
        Ok(DecodableSupport {
            support: e,
            product: s,
        })
    }

    /// Errors/erasures decoding: returns `e` with `H e^T = s`, every
    /// coordinate in the recovered support `E ⊇ T`.
    pub fn decode(
        &self,
        ctx: &FieldContext,
        erasure: &Subspace,
        syndrome: &[ExtElem],
    ) -> Result<Decoded> {
        let p = &self.params;
        let (n, red, d, r) = (p.n, p.redundancy(), p.f_dim, p.rank());
        if syndrome.len() != red {
            return Err(Error::Dimension(format!(
                "syndrome has {} coordinates, expected {red}",
                syndrome.len()
            )));
        }
        if erasure.dim() != p.erasure_dim {
            return Err(Error::Dimension(format!(
                "erasure has dimension {}, expected {}",
                erasure.dim(),
                p.erasure_dim
            )));
        }
        let found = self
            .check_decodable(ctx, erasure, syndrome)
            .map_err(Error::DecodingFailure)?;
        let e_basis = found.support.basis(ctx);

        // Syndrome coordinates over the product basis {F_l E_j}.
        let product_basis: Vec<ExtElem> = self
            .f_basis
            .iter()
            .flat_map(|f| e_basis.iter().map(move |e| (f, e)))
            .map(|(f, e)| ctx.mul(f, e))
            .collect();
        let basis_cols = coord_rows(ctx, &product_basis).transpose();
        let targets = coord_rows(ctx, syndrome).transpose();
        let sigma = matrix::solve_many(ctx.base(), &basis_cols, &targets)
            .expect("syndrome lies in the product space");
        let rhs: Vec<u64> = (0..red)
            .flat_map(|a| (0..d * r).map(move |lj| (a, lj)))
            .map(|(a, lj)| sigma[(lj, a)])
            .collect();
        let x = matrix::mul_vec(ctx.base(), &self.formal_inv, &rhs);

        let error: Vec<ExtElem> = (0..n)
            .map(|i| {
                let mut acc = ctx.zero();
                for (j, b) in e_basis.iter().enumerate() {
                    ctx.add_scaled(&mut acc, x[i * r + j], b);
                }
                acc
            })
            .collect();
        Ok(Decoded {
            error,
            support: found.support,
        })
    }
}

fn check_field(ctx: &FieldContext, params: &CodeParams) -> Result<()> {
    if ctx.q() != params.q || ctx.degree() != params.m {
        return Err(Error::InvalidParams(format!(
            "field GF({}^{}) does not match the parameters",
            ctx.q(),
            ctx.degree()
        )));
    }
    Ok(())
}

/// `dim(F_1^-1 F + F_2^-1 F) = 2d - 1`.
pub fn satisfies_f_condition(ctx: &FieldContext, f_basis: &[ExtElem]) -> bool {
    let d = f_basis.len();
    if d < 2 {
        return false;
    }
    let f = Subspace::span(ctx, f_basis);
    let (Ok(a), Ok(b)) = (f.scale_inv(ctx, &f_basis[0]), f.scale_inv(ctx, &f_basis[1])) else {
        return false;
    };
    a.sum(ctx, &b).dim() == 2 * d - 1
}

/// Samples `F_2, ..., F_d` uniformly (with `F_1 = 1`) until the basis is
/// independent and satisfies the decodability condition. Also returns the
/// number of candidates drawn.
pub fn sample_f_basis_counted<R: Rng + ?Sized>(
    ctx: &FieldContext,
    d: usize,
    rng: &mut R,
) -> Result<(Vec<ExtElem>, usize)> {
    for attempt in 1..=GENERATION_ATTEMPTS {
        let mut basis = vec![ctx.one()];
        basis.extend((1..d).map(|_| ctx.sample(rng)));
        if Subspace::span(ctx, &basis).dim() == d && satisfies_f_condition(ctx, &basis) {
            return Ok((basis, attempt));
        }
    }
    Err(Error::ResourceExhausted(GENERATION_ATTEMPTS))
}

fn sample_f_basis<R: Rng + ?Sized>(ctx: &FieldContext, d: usize, rng: &mut R) -> Result<Vec<ExtElem>> {
    sample_f_basis_counted(ctx, d, rng).map(|(b, _)| b)
}

fn assemble_h(ctx: &FieldContext, f_basis: &[ExtElem], h_coords: &[u64], rows: usize, cols: usize) -> MatExt {
    let d = f_basis.len();
    Matrix::from_fn(rows, cols, |a, i| {
        let mut acc = ctx.zero();
        for (l, f) in f_basis.iter().enumerate() {
            ctx.add_scaled(&mut acc, h_coords[(a * cols + i) * d + l], f);
        }
        acc
    })
}

/// Samples a support `E ⊇ T` satisfying the product-rank and intersection
/// conditions and a vector `e` in `E^n` whose syndrome satisfies the
/// generation condition. Returns `(e, E, s)`.
pub fn plant<R: Rng + ?Sized>(
    code: &LrpcCode,
    ctx: &FieldContext,
    erasure: &Subspace,
    rng: &mut R,
) -> Result<(Vec<ExtElem>, Subspace, Vec<ExtElem>)> {
    let p = code.params();
    for _ in 0..GENERATION_ATTEMPTS {
        let support = erasure.sample_superspace(ctx, p.rank(), rng)?;
        let e = support.sample_vector(ctx, p.n, rng);
        let s = code.syndrome(ctx, &e);
        if let Ok(found) = code.check_decodable(ctx, erasure, &s) {
            if found.support == support {
                return Ok((e, support, s));
            }
        }
    }
    Err(Error::ResourceExhausted(GENERATION_ATTEMPTS))
}
