//! Exact sphere/ball counting, the GVR and Singleton bounds, the density of
//! decodable syndromes, and exhaustive or Monte Carlo checks of the
//! counting claims at toy sizes.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{ExtElem, FieldContext};
use crate::lrpc::LrpcCode;
use crate::params::CodeParams;
use crate::subspace::Subspace;

/// Largest syndrome space the exhaustive oracle will walk.
pub const ORACLE_LIMIT_BITS: u32 = 24;

fn pow(q: u64, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Number of `m x n` matrices of rank `t` over GF(q):
/// `prod_{j<t} (q^n - q^j)(q^m - q^j) / (q^t - q^j)`.
pub fn sphere_size(n: usize, m: usize, q: u64, t: usize) -> BigUint {
    if t > n.min(m) {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..t {
        num *= (pow(q, n) - pow(q, j)) * (pow(q, m) - pow(q, j));
        den *= pow(q, t) - pow(q, j);
    }
    num / den
}

/// Number of matrices of rank at most `t`.
pub fn ball_size(n: usize, m: usize, q: u64, t: usize) -> BigUint {
    (0..=t).map(|i| sphere_size(n, m, q, i)).sum()
}

/// Smallest `t` with `B(n, m, q, t) >= q^{m(n-k)}`.
pub fn gvr(n: usize, k: usize, m: usize, q: u64) -> usize {
    let target = pow(q, m * (n - k));
    let mut ball = BigUint::zero();
    for t in 0..=n.min(m) {
        ball += sphere_size(n, m, q, t);
        if ball >= target {
            return t;
        }
    }
    n.min(m)
}

/// Rank Singleton bound: `1 + n - k`, or `1 + floor((n-k) m / n)` when `n > m`.
pub fn singleton(n: usize, k: usize, m: usize) -> usize {
    if n <= m {
        1 + n - k
    } else {
        1 + (n - k) * m / n
    }
}

/// Number of dimension `t + r'` subspaces of GF(q^m) containing a fixed
/// dimension `t` subspace.
pub fn count_superspaces(m: usize, q: u64, t: usize, free: usize) -> BigUint {
    assert!(t + free <= m, "t + r' must not exceed m");
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..free {
        num *= pow(q, m - t - i) - 1u32;
        den *= pow(q, i + 1) - 1u32;
    }
    num / den
}

/// `(r - t)(m - r) + (n - k)(rd - m)`: log base q of the expected
/// proportion of decodable syndromes.
pub fn density_exponent(p: &CodeParams) -> i64 {
    let (r, t, m) = (p.rank() as i64, p.erasure_dim as i64, p.m as i64);
    let (red, d) = (p.redundancy() as i64, p.f_dim as i64);
    (r - t) * (m - r) + red * (r * d - m)
}

/// `q^exponent` as an exact rational.
pub fn density_estimate(p: &CodeParams) -> BigRational {
    let e = density_exponent(p);
    let power = BigRational::from_integer(pow(p.q, e.unsigned_abs() as usize).into());
    if e >= 0 {
        power
    } else {
        power.recip()
    }
}

/// Bounds on the number of decodable syndromes for a fixed erasure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityBounds {
    pub lower: BigRational,
    pub upper: BigUint,
}

impl DensityBounds {
    pub fn contains(&self, count: &BigUint) -> bool {
        BigRational::from_integer(count.clone().into()) >= self.lower && count <= &self.upper
    }
}

/// `(1 - 1/(q-1))^2 E(T) q^{rd(n-k)} <= count <= E(T) q^{rd(n-k)}`, valid when
/// `r(2d - 1) <= m`.
pub fn tdecodable_bounds(p: &CodeParams) -> Result<DensityBounds> {
    let (r, d) = (p.rank(), p.f_dim);
    if r * (2 * d - 1) > p.m {
        return Err(Error::HypothesisViolated(format!(
            "r(2d-1) = {} exceeds m = {}",
            r * (2 * d - 1),
            p.m
        )));
    }
    let upper = count_superspaces(p.m, p.q, p.erasure_dim, p.free_dim) * pow(p.q, r * d * p.redundancy());
    let q = BigRational::from_integer(p.q.into());
    let one = BigRational::one();
    let factor = &one - (&q - &one).recip();
    let lower = &factor * &factor * BigRational::from_integer(upper.clone().into());
    Ok(DensityBounds { lower, upper })
}

/// Every dimension `dim` subspace containing `base`. Toy sizes only.
pub fn enumerate_superspaces(ctx: &FieldContext, base: &Subspace, dim: usize) -> Result<Vec<Subspace>> {
    if (ctx.q() as f64).powi(ctx.degree() as i32) > f64::from(1u32 << 20) {
        return Err(Error::TooLarge);
    }
    if dim < base.dim() || dim > ctx.degree() {
        return Err(Error::Dimension("no superspaces of that dimension".into()));
    }
    let all = Subspace::full(ctx.degree()).elements(ctx);
    let mut level = vec![base.clone()];
    for _ in base.dim()..dim {
        let mut next = HashSet::new();
        for s in &level {
            for v in &all {
                if !s.contains(ctx, v) {
                    next.insert(s.sum(ctx, &Subspace::span(ctx, std::slice::from_ref(v))));
                }
            }
        }
        level = next.into_iter().collect();
    }
    level.sort_by(|a, b| a.coords().entries().cmp(b.coords().entries()));
    Ok(level)
}

/// Result of the exhaustive count over supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCount {
    /// Number of decodable syndromes.
    pub count: BigUint,
    /// Supports `E ⊇ T` satisfying the product-rank and intersection conditions.
    pub valid_supports: usize,
    /// All supports `E ⊇ T` of dimension r.
    pub total_supports: usize,
}

fn guard(p: &CodeParams) -> Result<()> {
    let bits = (p.m * p.redundancy()) as f64 * p.log2_q();
    if bits > f64::from(ORACLE_LIMIT_BITS) {
        return Err(Error::TooLarge);
    }
    Ok(())
}

/// `dim <FT> = d * t` for the code's F.
pub fn erasure_is_admissible(ctx: &FieldContext, code: &LrpcCode, erasure: &Subspace) -> bool {
    code.f_space().product(ctx, erasure).dim() == code.params().f_dim * erasure.dim()
}

/// Counts decodable syndromes by walking every support `E ⊇ T`. For each
/// support meeting the product-rank and intersection conditions, the
/// syndromes generating `<FE>` together with `<FT>` number
/// `q^{dt(n-k)} * prod_{i < d r'} (q^{n-k} - q^i)`.
pub fn brute_force_tdecodable(ctx: &FieldContext, code: &LrpcCode, erasure: &Subspace) -> Result<SupportCount> {
    let p = code.params();
    guard(p)?;
    if !erasure_is_admissible(ctx, code, erasure) {
        return Err(Error::HypothesisViolated("dim <FT> != d t".into()));
    }
    let (d, r, red) = (p.f_dim, p.rank(), p.redundancy());
    let f = code.f_space();
    let (f1, f2) = (&code.f_basis()[0], &code.f_basis()[1]);
    let supports = enumerate_superspaces(ctx, erasure, r)?;
    let valid = supports
        .par_iter()
        .filter(|e| {
            let fe = f.product(ctx, e);
            if fe.dim() != d * r {
                return false;
            }
            let a = fe.scale_inv(ctx, f1).expect("nonzero");
            let b = fe.scale_inv(ctx, f2).expect("nonzero");
            a.intersect(ctx, &b).dim() == r
        })
        .count();
    let mut per_support = pow(p.q, d * erasure.dim() * red);
    let qr = pow(p.q, red);
    for i in 0..d * (r - erasure.dim()) {
        let term = pow(p.q, i);
        if term > qr {
            per_support = BigUint::zero();
            break;
        }
        per_support *= &qr - term;
    }
    Ok(SupportCount {
        count: per_support * valid,
        valid_supports: valid,
        total_supports: supports.len(),
    })
}

/// Counts decodable syndromes by running the decoder's condition check on
/// every syndrome in GF(q^m)^{n-k}.
pub fn brute_force_tdecodable_by_syndromes(
    ctx: &FieldContext,
    code: &LrpcCode,
    erasure: &Subspace,
) -> Result<u64> {
    let p = code.params();
    guard(p)?;
    let elements = Subspace::full(ctx.degree()).elements(ctx);
    let size = elements.len() as u64;
    let red = p.redundancy();
    let total = size.pow(red as u32);
    let count = (0..total)
        .into_par_iter()
        .filter(|&index| {
            let mut idx = index;
            let syndrome: Vec<ExtElem> = (0..red)
                .map(|_| {
                    let x = elements[(idx % size) as usize].clone();
                    idx /= size;
                    x
                })
                .collect();
            code.check_decodable(ctx, erasure, &syndrome).is_ok()
        })
        .count();
    Ok(count as u64)
}

/// `q^{a(t+b)} / ((q-1) q^m)`.
pub fn product_deficiency_bound(alpha: usize, t: usize, beta: usize, m: usize, q: u64) -> f64 {
    let q = q as f64;
    q.powi((alpha * (t + beta)) as i32) / ((q - 1.0) * q.powi(m as i32))
}

/// Empirical probability that `dim <AB> < alpha (t + beta)`, where `A` is a
/// uniform dimension-`alpha` subspace, `T` a uniform dimension-`t` subspace
/// with `dim <AT> = alpha t`, and `B = T + <b_1, ..., b_beta>` for uniform
/// vectors `b_i`. Trials run in parallel on independent ChaCha streams
/// derived from one draw of `rng`.
pub fn product_deficiency_rate<R: Rng + ?Sized>(
    alpha: usize,
    t: usize,
    beta: usize,
    m: usize,
    q: u64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if alpha * (t + beta) > m {
        return Err(Error::HypothesisViolated(format!(
            "alpha (t + beta) = {} exceeds m = {m}",
            alpha * (t + beta)
        )));
    }
    if trials == 0 {
        return Ok(0.0);
    }
    let ctx = FieldContext::with_order(q, m)?;
    let seed: [u8; 32] = rng.gen();
    const CHUNK: usize = 1024;
    let chunks = trials.div_ceil(CHUNK);
    let failures: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha20Rng::from_seed(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(trials - c * CHUNK);
            (0..n)
                .filter(|_| product_is_deficient(&ctx, alpha, t, beta, &mut rng))
                .count()
        })
        .sum();
    Ok(failures as f64 / trials as f64)
}

fn product_is_deficient(ctx: &FieldContext, alpha: usize, t: usize, beta: usize, rng: &mut ChaCha20Rng) -> bool {
    let a = Subspace::sample(ctx, alpha, rng).expect("alpha <= m");
    let erasure = loop {
        let cand = Subspace::sample(ctx, t, rng).expect("t <= m");
        if a.product(ctx, &cand).dim() == alpha * t {
            break cand;
        }
    };
    let extra: Vec<ExtElem> = (0..beta).map(|_| ctx.sample(rng)).collect();
    let b = erasure.sum(ctx, &Subspace::span(ctx, &extra));
    a.product(ctx, &b).dim() < alpha * (t + beta)
}

/// Outcome of decoding uniform syndromes with uniform erasures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DensityExperiment {
    pub trials: usize,
    pub successes: usize,
    pub product_rank: usize,
    pub intersection: usize,
    pub generation: usize,
}

impl DensityExperiment {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.successes as f64 / self.trials as f64
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.successes += other.successes;
        self.product_rank += other.product_rank;
        self.intersection += other.intersection;
        self.generation += other.generation;
        self
    }
}

/// Decodes `trials` uniform syndromes, each with a fresh uniform erasure of
/// dimension `t`. Trials run on independent ChaCha streams derived from one
/// draw of `rng`.
pub fn density_experiment<R: Rng + ?Sized>(
    ctx: &FieldContext,
    code: &LrpcCode,
    trials: usize,
    rng: &mut R,
) -> DensityExperiment {
    let p = code.params();
    let seed: [u8; 32] = rng.gen();
    const CHUNK: usize = 1024;
    (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha20Rng::from_seed(seed);
            rng.set_stream(c as u64);
            let mut out = DensityExperiment::default();
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                out.trials += 1;
                let erasure = Subspace::sample(ctx, p.erasure_dim, &mut rng).expect("t <= m");
                let s: Vec<ExtElem> = (0..p.redundancy()).map(|_| ctx.sample(&mut rng)).collect();
                match code.check_decodable(ctx, &erasure, &s) {
                    Ok(_) => out.successes += 1,
                    Err(flags) => {
                        out.product_rank += usize::from(flags.product_rank);
                        out.intersection += usize::from(flags.intersection);
                        out.generation += usize::from(flags.generation);
                    }
                }
            }
            out
        })
        .reduce(DensityExperiment::default, DensityExperiment::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::preset;

    #[test]
    fn sphere_sizes() {
        for q in [2, 3, 16] {
            assert_eq!(sphere_size(5, 7, q, 0), BigUint::one());
            let expect = (pow(q, 5) - 1u32) * (pow(q, 7) - 1u32) / (q - 1);
            assert_eq!(sphere_size(5, 7, q, 1), expect);
        }
        assert_eq!(sphere_size(3, 3, 2, 1), BigUint::from(49u32));
        assert_eq!(sphere_size(2, 2, 2, 2), BigUint::from(6u32));
        assert_eq!(sphere_size(2, 3, 2, 3), BigUint::zero());
    }

    /// Rank distribution of all 2x2 and 3x3 binary matrices, by enumeration.
    #[test]
    fn sphere_sizes_match_enumeration() {
        let f = crate::field::BaseField::binary(1).unwrap();
        for (n, m) in [(2, 2), (3, 3), (2, 3)] {
            let mut counts = [0u32; 4];
            for bits in 0u32..1 << (n * m) {
                let mat = crate::matrix::Matrix::from_fn(m, n, |i, j| u64::from(bits >> (i * n + j) & 1));
                counts[crate::matrix::rank(&f, &mat)] += 1;
            }
            for (t, &c) in counts.iter().enumerate() {
                assert_eq!(sphere_size(n, m, 2, t), BigUint::from(c), "n={n} m={m} t={t}");
            }
        }
    }

    #[test]
    fn completeness_identity() {
        for q in [2u64, 3, 4] {
            for n in 1..=4 {
                for m in 1..=4 {
                    let total = ball_size(n, m, q, n.min(m));
                    assert_eq!(total, pow(q, n * m));
                    for t in 0..=n.min(m) {
                        assert!(ball_size(n, m, q, t) >= sphere_size(n, m, q, t));
                    }
                }
            }
        }
    }

    #[test]
    fn gvr_and_singleton() {
        assert_eq!(gvr(10, 10, 12, 2), 0);
        assert_eq!(gvr(16, 8, 18, 256), 5);
        assert_eq!(gvr(18, 10, 18, 256), 5);
        assert_eq!(gvr(20, 10, 24, 256), 7);
        assert_eq!(gvr(23, 13, 24, 256), 6);
        assert_eq!(singleton(8, 3, 8), 6);
        assert_eq!(singleton(48, 36, 40), 11);
    }

    #[test]
    fn superspace_counts() {
        assert_eq!(count_superspaces(9, 2, 3, 0), BigUint::one());
        assert_eq!(count_superspaces(7, 3, 2, 1), (pow(3, 5) - 1u32) / 2u32);
        assert_eq!(count_superspaces(5, 2, 1, 1), BigUint::from(15u32));
        assert_eq!(count_superspaces(6, 3, 1, 1), BigUint::from(121u32));
        let ctx = FieldContext::with_order(2, 5).unwrap();
        let t = Subspace::span(&ctx, &[ctx.one()]);
        assert_eq!(enumerate_superspaces(&ctx, &t, 2).unwrap().len(), 15);
        let ctx3 = FieldContext::with_order(3, 4).unwrap();
        let t3 = Subspace::span(&ctx3, &[ctx3.generator()]);
        let expect = count_superspaces(4, 3, 1, 2);
        assert_eq!(BigUint::from(enumerate_superspaces(&ctx3, &t3, 3).unwrap().len()), expect);
    }

    #[test]
    fn density_exponents() {
        let row2 = preset("row2").unwrap().params;
        assert_eq!(density_exponent(&row2), 0);
        assert_eq!(density_estimate(&row2), BigRational::one());
        let scaled = CodeParams {
            m: 36,
            erasure_dim: 4,
            free_dim: 8,
            n: 32,
            k: 16,
            ..row2
        };
        assert_eq!(density_exponent(&scaled), 0);
        assert_eq!(density_exponent(&preset("row4").unwrap().params), 0);
        let sparse = CodeParams { m: 19, ..row2 };
        assert_eq!(density_exponent(&sparse), -4);
        assert_eq!(
            density_estimate(&sparse),
            BigRational::from_integer(pow(256, 4).into()).recip()
        );
    }

    #[test]
    fn count_bounds() {
        let p = preset("toy-q3").unwrap().params;
        let b = tdecodable_bounds(&p).unwrap();
        assert_eq!(b.upper, BigUint::from(121u32 * 6561));
        assert_eq!(
            b.lower / BigRational::from_integer(b.upper.clone().into()),
            BigRational::new(1.into(), 4.into())
        );
        let wide = CodeParams { f_dim: 3, ..p };
        assert!(matches!(tdecodable_bounds(&wide), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn deficiency_degenerate_and_hypothesis() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert_eq!(product_deficiency_rate(2, 1, 0, 6, 3, 500, &mut rng).unwrap(), 0.0);
        assert!(matches!(
            product_deficiency_rate(3, 2, 2, 8, 3, 10, &mut rng),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn deficiency_trend_in_m() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let rates: Vec<f64> = [6, 8, 10]
            .iter()
            .map(|&m| product_deficiency_rate(2, 1, 2, m, 3, 20_000, &mut rng).unwrap())
            .collect();
        for w in rates.windows(2) {
            assert!(w[1] <= w[0] + 0.01, "{rates:?}");
        }
        for (&m, &rate) in [6usize, 8, 10].iter().zip(&rates) {
            let bound = product_deficiency_bound(2, 1, 2, m, 3);
            let sigma = (bound * (1.0 - bound.min(1.0)) / 20_000.0).sqrt();
            assert!(rate <= bound + 3.0 * sigma, "m={m} rate={rate} bound={bound}");
        }
    }

    #[test]
    fn density_experiment_is_reproducible() {
        let p = preset("toy-q16").unwrap().params;
        let ctx = FieldContext::with_order(p.q, p.m).unwrap();
        let code = LrpcCode::generate(&ctx, &p, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        let a = density_experiment(&ctx, &code, 2500, &mut ChaCha20Rng::seed_from_u64(2));
        let b = density_experiment(&ctx, &code, 2500, &mut ChaCha20Rng::seed_from_u64(2));
        assert_eq!(a, b);
        assert_eq!(a.trials, 2500);
        assert!(a.success_rate() > 0.7);
        assert!(a.trials - a.successes <= a.product_rank + a.intersection + a.generation);
    }
}
