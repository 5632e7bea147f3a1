//! Hash-and-sign signatures from augmented LRPC codes.
//!
//! The public key is `H' = A (R | H) P`. To sign, the signer hashes the
//! message with a fresh seed to a syndrome `s`, draws the first `t'`
//! coordinates `tau` itself, decodes `A^-1 s - R tau` with the LRPC code
//! using the support of `tau` as erasure, and publishes
//! `e = (tau, e_H) (P^T)^-1`, a vector of rank `r` with `H' e^T = s`.

use rand::Rng;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Digest, Sha3_256, Shake256};

use crate::error::{Error, FailureFlags, Result};
use crate::field::{ExtElem, FieldContext};
use crate::lrpc::LrpcCode;
use crate::matrix::{self, MatExt, MatGFq};
use crate::params::CodeParams;
use crate::rank_metric::rank_weight;
use crate::subspace::Subspace;

pub const SEED_BYTES: usize = 10;
pub const SEED_BITS: u16 = (SEED_BYTES * 8) as u16;
pub const SIGN_ATTEMPTS: usize = 256;
const HASH_TAG: &[u8] = b"RankSign/hash-to-syndrome/v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    code: LrpcCode,
    a: MatExt,
    a_inv: MatExt,
    p: MatGFq,
    p_t_inv: MatGFq,
    r: MatExt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    params: CodeParams,
    matrix: MatExt,
    seed_len_bits: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub seed: [u8; SEED_BYTES],
    pub e: Vec<ExtElem>,
}

/// Retry statistics of one signing call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SignStats {
    pub attempts: usize,
    pub decode_failures: usize,
    pub rank_failures: usize,
    /// Failure flags accumulated over all failed decodes.
    pub flags: FailureFlags,
}

/// A forged-looking couple built from the public key alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulatedSignature {
    pub e: Vec<ExtElem>,
    pub syndrome: Vec<ExtElem>,
}

impl SecretKey {
    /// Assembles a secret key, checking shapes and invertibility.
    pub fn from_parts(
        ctx: &FieldContext,
        code: LrpcCode,
        a: MatExt,
        p: MatGFq,
        r: MatExt,
    ) -> Result<Self> {
        let params = *code.params();
        let red = params.redundancy();
        let len = params.public_len();
        if a.shape() != (red, red) || p.shape() != (len, len) || r.shape() != (red, params.extra_cols) {
            return Err(Error::InvalidKey("matrix shapes do not match the parameters".into()));
        }
        if !p.entries().iter().all(|&x| ctx.base().contains(x)) {
            return Err(Error::InvalidKey("P has entries outside GF(q)".into()));
        }
        if !a.entries().iter().chain(r.entries()).all(|x| ctx.is_valid(x)) {
            return Err(Error::InvalidKey("invalid extension element".into()));
        }
        let a_inv = matrix::invert(ctx, &a).map_err(|_| Error::InvalidKey("A is singular".into()))?;
        let p_t_inv = matrix::invert(ctx.base(), &p.transpose())
            .map_err(|_| Error::InvalidKey("P is singular".into()))?;
        Ok(SecretKey {
            code,
            a,
            a_inv,
            p,
            p_t_inv,
            r,
        })
    }

    pub fn params(&self) -> &CodeParams {
        self.code.params()
    }

    pub fn code(&self) -> &LrpcCode {
        &self.code
    }

    pub fn mixing(&self) -> &MatExt {
        &self.a
    }

    pub fn permutation(&self) -> &MatGFq {
        &self.p
    }

    pub fn extra_columns(&self) -> &MatExt {
        &self.r
    }

    /// `A (R | H) P`.
    pub fn public_matrix(&self, ctx: &FieldContext) -> MatExt {
        let rh = self.r.hstack(self.code.parity_check()).expect("row counts agree");
        let arh = matrix::mul(ctx, &self.a, &rh).expect("shapes agree");
        matrix::mul_ext_base(ctx, &arh, &self.p).expect("shapes agree")
    }
}

impl PublicKey {
    pub fn new(params: CodeParams, matrix: MatExt, seed_len_bits: u16) -> Result<Self> {
        params.validate()?;
        if matrix.shape() != (params.redundancy(), params.public_len()) {
            return Err(Error::InvalidKey(format!(
                "public matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                params.redundancy(),
                params.public_len()
            )));
        }
        if seed_len_bits < SEED_BITS {
            return Err(Error::InvalidKey(format!("seed length {seed_len_bits} below 80 bits")));
        }
        Ok(PublicKey {
            params,
            matrix,
            seed_len_bits,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn matrix(&self) -> &MatExt {
        &self.matrix
    }

    pub fn seed_len_bits(&self) -> u16 {
        self.seed_len_bits
    }
}

/// The scheme for one parameter set over a fixed field.
#[derive(Clone, Debug)]
pub struct RankSign {
    params: CodeParams,
    ctx: FieldContext,
}

impl RankSign {
    pub fn new(params: CodeParams) -> Result<Self> {
        params.validate_for_scheme()?;
        let ctx = FieldContext::with_order(params.q, params.m)?;
        Ok(RankSign { params, ctx })
    }

    /// Uses an existing field, which must match the parameters.
    pub fn with_field(params: CodeParams, ctx: FieldContext) -> Result<Self> {
        params.validate_for_scheme()?;
        if ctx.q() != params.q || ctx.degree() != params.m {
            return Err(Error::InvalidParams("field does not match the parameters".into()));
        }
        Ok(RankSign { params, ctx })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn field(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(SecretKey, PublicKey)> {
        let ctx = &self.ctx;
        let p = &self.params;
        let code = LrpcCode::generate(ctx, p, rng)?;
        let a = matrix::sample_invertible(ctx, p.redundancy(), rng);
        let perm = matrix::sample_invertible(ctx.base(), p.public_len(), rng);
        let r = matrix::random(ctx, p.redundancy(), p.extra_cols, rng);
        let sk = SecretKey::from_parts(ctx, code, a, perm, r)?;
        let pk = PublicKey::new(*p, sk.public_matrix(ctx), SEED_BITS)?;
        Ok((sk, pk))
    }

    /// Expands `tag ‖ SHA3-256(params) ‖ len ‖ message ‖ len ‖ seed ‖ counter`
    /// with SHAKE256 into `n - k` field elements, one β-coordinate digit at a
    /// time.
    pub fn hash_to_syndrome(&self, pk: &PublicKey, message: &[u8], seed: &[u8], counter: u64) -> Vec<ExtElem> {
        hash_to_syndrome(&self.ctx, pk.params(), message, seed, counter)
    }

    pub fn sign<R: Rng + ?Sized>(
        &self,
        sk: &SecretKey,
        pk: &PublicKey,
        message: &[u8],
        rng: &mut R,
    ) -> Result<Signature> {
        self.sign_with_stats(sk, pk, message, rng).map(|(sig, _)| sig)
    }

    pub fn sign_with_stats<R: Rng + ?Sized>(
        &self,
        sk: &SecretKey,
        pk: &PublicKey,
        message: &[u8],
        rng: &mut R,
    ) -> Result<(Signature, SignStats)> {
        let ctx = &self.ctx;
        let p = &self.params;
        if sk.params() != p || pk.params() != p {
            return Err(Error::InvalidKey("key parameters differ from the scheme".into()));
        }
        let mut stats = SignStats::default();
        while stats.attempts < SIGN_ATTEMPTS {
            stats.attempts += 1;
            let mut seed = [0u8; SEED_BYTES];
            rng.fill(&mut seed);
            let (tau, erasure) = self.sample_erasure(rng);
            let s = self.hash_to_syndrome(pk, message, &seed, 0);
            let a_inv_s = matrix::mul_vec(ctx, &sk.a_inv, &s);
            let r_tau = matrix::mul_vec(ctx, &sk.r, &tau);
            let target: Vec<ExtElem> = a_inv_s.iter().zip(&r_tau).map(|(x, y)| ctx.sub(x, y)).collect();
            let decoded = match sk.code.decode(ctx, &erasure, &target) {
                Ok(d) => d,
                Err(Error::DecodingFailure(flags)) => {
                    stats.decode_failures += 1;
                    stats.flags.product_rank |= flags.product_rank;
                    stats.flags.intersection |= flags.intersection;
                    stats.flags.generation |= flags.generation;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut x = tau;
            x.extend(decoded.error);
            if rank_weight(ctx, &x) != p.rank() {
                stats.rank_failures += 1;
                continue;
            }
            let sig = Signature {
                seed,
                e: matrix::vec_mul_base(ctx, &x, &sk.p_t_inv),
            };
            if !self.verify(pk, message, &sig)? {
                return Err(Error::InvalidKey("secret key does not match the public key".into()));
            }
            return Ok((sig, stats));
        }
        Err(Error::ResourceExhausted(SIGN_ATTEMPTS))
    }

    /// The first `t'` coordinates of a signature and the erasure space.
    ///
    /// With `t' = t` they are drawn uniformly until they have rank `t`, and
    /// the erasure is their support. Otherwise a uniform dimension-`t`
    /// erasure is drawn and the coordinates are uniform in it.
    fn sample_erasure<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<ExtElem>, Subspace) {
        let ctx = &self.ctx;
        let p = &self.params;
        if p.extra_cols == p.erasure_dim {
            loop {
                let tau: Vec<ExtElem> = (0..p.extra_cols).map(|_| ctx.sample(rng)).collect();
                let support = Subspace::span(ctx, &tau);
                if support.dim() == p.erasure_dim {
                    return (tau, support);
                }
            }
        }
        let erasure = Subspace::sample(ctx, p.erasure_dim, rng).expect("t <= m");
        (erasure.sample_vector(ctx, p.extra_cols, rng), erasure)
    }

    /// Accepts iff `rank(e) = r` and `H' e^T = hash(message, seed)`.
    pub fn verify(&self, pk: &PublicKey, message: &[u8], sig: &Signature) -> Result<bool> {
        let ctx = &self.ctx;
        let p = pk.params();
        if p != &self.params {
            return Err(Error::InvalidKey("public key parameters differ from the scheme".into()));
        }
        if sig.e.len() != p.public_len() {
            return Err(Error::MalformedSignature(format!(
                "{} coordinates, expected {}",
                sig.e.len(),
                p.public_len()
            )));
        }
        if !sig.e.iter().all(|x| ctx.is_valid(x)) {
            return Err(Error::MalformedSignature("coordinate outside the field".into()));
        }
        if rank_weight(ctx, &sig.e) != p.rank() {
            return Ok(false);
        }
        let expected = self.hash_to_syndrome(pk, message, &sig.seed, 0);
        Ok(matrix::mul_vec(ctx, pk.matrix(), &sig.e) == expected)
    }

    /// A uniform vector of rank `r` and its public syndrome.
    pub fn simulate_signature<R: Rng + ?Sized>(&self, pk: &PublicKey, rng: &mut R) -> SimulatedSignature {
        let ctx = &self.ctx;
        let p = pk.params();
        let support = Subspace::sample(ctx, p.rank(), rng).expect("r <= m");
        let e = loop {
            let e = support.sample_vector(ctx, p.public_len(), rng);
            if rank_weight(ctx, &e) == p.rank() {
                break e;
            }
        };
        let syndrome = matrix::mul_vec(ctx, pk.matrix(), &e);
        SimulatedSignature { e, syndrome }
    }
}

/// See [`RankSign::hash_to_syndrome`].
pub fn hash_to_syndrome(
    ctx: &FieldContext,
    params: &CodeParams,
    message: &[u8],
    seed: &[u8],
    counter: u64,
) -> Vec<ExtElem> {
    let mut xof = Shake256::default();
    xof.update(HASH_TAG);
    xof.update(&Sha3_256::digest(params.to_bytes()));
    xof.update(&(message.len() as u64).to_le_bytes());
    xof.update(message);
    xof.update(&(seed.len() as u64).to_le_bytes());
    xof.update(seed);
    xof.update(&counter.to_le_bytes());
    let mut reader = xof.finalize_xof();

    let base = ctx.base();
    let width = base.digit_bytes();
    let mask = if base.digit_bits() >= 64 {
        u64::MAX
    } else {
        (1u64 << base.digit_bits()) - 1
    };
    let mut digit = move || loop {
        let mut buf = [0u8; 8];
        reader.read(&mut buf[..width]);
        let v = u64::from_le_bytes(buf) & mask;
        if base.contains(v) {
            return v;
        }
    };
    (0..params.redundancy())
        .map(|_| {
            let coords: Vec<u64> = (0..ctx.degree()).map(|_| digit()).collect();
            ctx.coords_to_elem(&coords)
        })
        .collect()
}

/// Per-signature statistics compared between authentic and simulated
/// populations: the rank of the first `r` coordinates, the number of
/// collinear coordinate pairs, and the number of later coordinates lying in
/// the span of the first two.
pub fn structural_statistics(ctx: &FieldContext, rank: usize, e: &[ExtElem]) -> [usize; 3] {
    let head = rank_weight(ctx, &e[..rank.min(e.len())]);
    let mut collinear = 0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if rank_weight(ctx, &[e[i].clone(), e[j].clone()]) <= 1 {
                collinear += 1;
            }
        }
    }
    let split = 2.min(e.len());
    let plane = Subspace::span(ctx, &e[..split]);
    let in_plane = e[split..].iter().filter(|x| plane.contains(ctx, x)).count();
    [head, collinear, in_plane]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::preset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn scheme(name: &str) -> RankSign {
        RankSign::new(preset(name).unwrap().params).unwrap()
    }

    #[test]
    fn sign_verify_round_trip() {
        for name in ["toy-q2", "toy-q3", "toy-q16", "row2"] {
            let rs = scheme(name);
            let mut rng = ChaCha20Rng::seed_from_u64(1);
            let (sk, pk) = rs.keygen(&mut rng).unwrap();
            assert_eq!(pk.matrix().shape(), (rs.params().redundancy(), rs.params().public_len()));
            for i in 0..20u32 {
                let msg = i.to_le_bytes();
                let sig = rs.sign(&sk, &pk, &msg, &mut rng).unwrap();
                assert!(rs.verify(&pk, &msg, &sig).unwrap(), "{name}");
                assert_eq!(rank_weight(rs.field(), &sig.e), rs.params().rank());
                assert!(!rs.verify(&pk, b"other", &sig).unwrap());
            }
        }
    }

    #[test]
    fn hash_is_deterministic_and_separated() {
        let rs = scheme("row2");
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let (_, pk) = rs.keygen(&mut rng).unwrap();
        let a = rs.hash_to_syndrome(&pk, b"msg", &[1; 10], 0);
        assert_eq!(a, rs.hash_to_syndrome(&pk, b"msg", &[1; 10], 0));
        assert_ne!(a, rs.hash_to_syndrome(&pk, b"msg", &[1; 10], 1));
        assert_ne!(a, rs.hash_to_syndrome(&pk, b"msg", &[2; 10], 0));
        assert_ne!(a, rs.hash_to_syndrome(&pk, b"msh", &[1; 10], 0));
        // Length prefixes separate message and seed boundaries.
        assert_ne!(
            hash_to_syndrome(rs.field(), pk.params(), b"ab", b"c", 0),
            hash_to_syndrome(rs.field(), pk.params(), b"a", b"bc", 0)
        );
        assert_eq!(a.len(), 8);
    }

    #[test]
    fn hash_digits_valid_for_odd_prime() {
        let rs = scheme("toy-q3");
        let p = rs.params();
        for c in 0..200 {
            for x in hash_to_syndrome(rs.field(), p, b"m", b"s", c) {
                assert!(rs.field().is_valid(&x));
            }
        }
    }

    #[test]
    fn rank_deficient_signature_rejected() {
        let rs = scheme("toy-q16");
        let ctx = rs.field();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (sk, pk) = rs.keygen(&mut rng).unwrap();
        let sig = rs.sign(&sk, &pk, b"m", &mut rng).unwrap();
        // Project into a smaller support: replace every coordinate by its
        // component over the first r-1 basis vectors of the support.
        let support = Subspace::span(ctx, &sig.e);
        let small = Subspace::span(ctx, &support.basis(ctx)[..rs.params().rank() - 1]);
        let e: Vec<ExtElem> = sig
            .e
            .iter()
            .map(|x| {
                let coords = ctx.to_coords(x);
                let mut y = ctx.zero();
                for (b, row) in small.basis(ctx).iter().zip(0..) {
                    let pivot = small.coords().row(row).iter().position(|&c| c != 0).unwrap();
                    ctx.add_scaled(&mut y, coords[pivot], b);
                }
                y
            })
            .collect();
        assert!(rank_weight(ctx, &e) < rs.params().rank());
        let forged = Signature { seed: sig.seed, e };
        assert!(!rs.verify(&pk, b"m", &forged).unwrap());
        let short = Signature {
            seed: sig.seed,
            e: sig.e[1..].to_vec(),
        };
        assert!(matches!(rs.verify(&pk, b"m", &short), Err(Error::MalformedSignature(_))));
    }

    #[test]
    fn simulated_couples_are_valid() {
        let rs = scheme("toy-q16");
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (_, pk) = rs.keygen(&mut rng).unwrap();
        for _ in 0..100 {
            let sim = rs.simulate_signature(&pk, &mut rng);
            assert_eq!(rank_weight(rs.field(), &sim.e), rs.params().rank());
            assert_eq!(matrix::mul_vec(rs.field(), pk.matrix(), &sim.e), sim.syndrome);
        }
    }

    #[test]
    fn mismatched_extra_columns() {
        // t' < t: the erasure is sampled separately from tau.
        let params = CodeParams {
            extra_cols: 1,
            ..preset("toy-q16").unwrap().params
        };
        let params = CodeParams { erasure_dim: 2, free_dim: 2, m: 12, ..params };
        let rs = RankSign::new(params).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let (sk, pk) = rs.keygen(&mut rng).unwrap();
        for i in 0..10u8 {
            let sig = rs.sign(&sk, &pk, &[i], &mut rng).unwrap();
            assert!(rs.verify(&pk, &[i], &sig).unwrap());
        }
    }

    #[test]
    fn isometry_sanity() {
        let rs = scheme("row2");
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let (sk, pk) = rs.keygen(&mut rng).unwrap();
        let sig = rs.sign(&sk, &pk, b"m", &mut rng).unwrap();
        let back = matrix::vec_mul_base(rs.field(), &sig.e, &sk.permutation().transpose());
        assert_eq!(rank_weight(rs.field(), &back), rank_weight(rs.field(), &sig.e));
    }
}
