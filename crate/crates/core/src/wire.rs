//! Byte formats for parameters, keys and signatures.
//!
//! Every encoding starts with the magic `RKSN`, a version byte and a kind
//! byte. Field elements are `m` base-field digits in β-coordinates, each
//! digit little-endian over `ceil(log2 q / 8)` bytes. Matrices are row-major.
//!
//! | kind      | body                                                      |
//! |-----------|-----------------------------------------------------------|
//! | params    | params block (8 x u16 LE)                                 |
//! | public    | params block, `H'`, seed length in bits (u16 LE)          |
//! | secret    | params block, F basis, `H`, `A`, `P` (one digit each), `R`|
//! | signature | 10-byte seed, the `n + t'` coordinates of `e`             |

use thiserror::Error;

use crate::error::Error;
use crate::field::{ExtElem, FieldContext};
use crate::lrpc::LrpcCode;
use crate::matrix::{MatExt, MatGFq, Matrix};
use crate::params::CodeParams;
use crate::ranksign::{PublicKey, SecretKey, Signature, SEED_BYTES};

pub const MAGIC: [u8; 4] = *b"RKSN";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 6;
pub const PARAMS_LEN: usize = 16;

pub const PUBLIC_EXT: &str = "rkpk";
pub const SECRET_EXT: &str = "rksk";
pub const SIGNATURE_EXT: &str = "rksig";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Kind {
    Params = 1,
    Public = 2,
    Secret = 3,
    Signature = 4,
}

impl Kind {
    fn from_byte(b: u8) -> Option<Kind> {
        match b {
            1 => Some(Kind::Params),
            2 => Some(Kind::Public),
            3 => Some(Kind::Secret),
            4 => Some(Kind::Signature),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0:#04x}")]
    BadVersion(u8),
    #[error("unknown kind byte {0:#04x}")]
    UnknownKind(u8),
    #[error("expected a {expected:?} encoding, found {found:?}")]
    WrongKind { expected: Kind, found: Kind },
    #[error("truncated: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("digit {0:#x} is outside the base field")]
    InvalidDigit(u64),
    #[error("field GF({field_q}^{field_m}) does not match parameters {params}")]
    RankFieldMismatch {
        params: CodeParams,
        field_q: u64,
        field_m: usize,
    },
    #[error("encoding too large")]
    TooLarge,
    #[error(transparent)]
    Invalid(#[from] Error),
}

pub type WireResult<T> = std::result::Result<T, WireError>;

/// Bytes per base-field digit.
pub fn digit_width(q: u64) -> usize {
    let bits = 64 - (q - 1).leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

struct Writer {
    out: Vec<u8>,
    width: usize,
}

impl Writer {
    fn new(kind: Kind, width: usize) -> Self {
        let mut out = MAGIC.to_vec();
        out.push(VERSION);
        out.push(kind as u8);
        Writer { out, width }
    }

    fn digit(&mut self, d: u64) {
        self.out.extend_from_slice(&d.to_le_bytes()[..self.width]);
    }

    fn elem(&mut self, ctx: &FieldContext, x: &ExtElem) {
        for d in ctx.to_coords(x) {
            self.digit(d);
        }
    }

    fn elems<'a>(&mut self, ctx: &FieldContext, xs: impl IntoIterator<Item = &'a ExtElem>) {
        for x in xs {
            self.elem(ctx, x);
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> WireResult<&'a [u8]> {
        let end = self.pos.checked_add(len).ok_or(WireError::TooLarge)?;
        if end > self.bytes.len() {
            return Err(WireError::Truncated {
                needed: end,
                available: self.bytes.len(),
            });
        }
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u16(&mut self) -> WireResult<u16> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn params(&mut self) -> WireResult<CodeParams> {
        let block: [u8; PARAMS_LEN] = self.take(PARAMS_LEN)?.try_into().expect("length checked");
        Ok(CodeParams::from_bytes(&block)?)
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn finish(&self) -> WireResult<()> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(WireError::TrailingBytes(n)),
        }
    }
}

fn open(bytes: &[u8], expected: Kind) -> WireResult<Reader<'_>> {
    if bytes.len() < 4 || bytes[..4] != MAGIC {
        return Err(WireError::BadMagic);
    }
    let mut r = Reader { bytes, pos: 4 };
    let header = r.take(2)?;
    if header[0] != VERSION {
        return Err(WireError::BadVersion(header[0]));
    }
    let found = Kind::from_byte(header[1]).ok_or(WireError::UnknownKind(header[1]))?;
    if found != expected {
        return Err(WireError::WrongKind { expected, found });
    }
    Ok(r)
}

/// Field reader bound to a context.
struct ElemReader<'a, 'b> {
    r: Reader<'a>,
    ctx: &'b FieldContext,
    width: usize,
}

impl ElemReader<'_, '_> {
    fn digit(&mut self) -> WireResult<u64> {
        let b = self.r.take(self.width)?;
        let mut buf = [0u8; 8];
        buf[..self.width].copy_from_slice(b);
        let d = u64::from_le_bytes(buf);
        if self.ctx.base().contains(d) {
            Ok(d)
        } else {
            Err(WireError::InvalidDigit(d))
        }
    }

    fn elem(&mut self) -> WireResult<ExtElem> {
        let coords = (0..self.ctx.degree())
            .map(|_| self.digit())
            .collect::<WireResult<Vec<u64>>>()?;
        Ok(self.ctx.from_coords(&coords)?)
    }

    fn elems(&mut self, count: usize) -> WireResult<Vec<ExtElem>> {
        (0..count).map(|_| self.elem()).collect()
    }

    fn ext_matrix(&mut self, rows: usize, cols: usize) -> WireResult<MatExt> {
        Ok(Matrix::new(rows, cols, self.elems(rows * cols)?)?)
    }

    fn base_matrix(&mut self, rows: usize, cols: usize) -> WireResult<MatGFq> {
        let entries = (0..rows * cols).map(|_| self.digit()).collect::<WireResult<Vec<u64>>>()?;
        Ok(Matrix::new(rows, cols, entries)?)
    }
}

fn check_field(ctx: &FieldContext, params: &CodeParams) -> WireResult<()> {
    if ctx.q() != params.q || ctx.degree() != params.m {
        return Err(WireError::RankFieldMismatch {
            params: *params,
            field_q: ctx.q(),
            field_m: ctx.degree(),
        });
    }
    Ok(())
}

fn mul(factors: &[usize]) -> WireResult<usize> {
    factors
        .iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(x))
        .ok_or(WireError::TooLarge)
}

/// Body length after the params block, by kind.
fn body_len(kind: Kind, p: &CodeParams) -> WireResult<usize> {
    let w = digit_width(p.q);
    let elem = mul(&[p.m, w])?;
    let red = p.redundancy();
    let len = match kind {
        Kind::Params => 0,
        Kind::Public => mul(&[red, p.public_len(), elem])?.checked_add(2).ok_or(WireError::TooLarge)?,
        Kind::Secret => {
            let ext = [p.f_dim, mul(&[red, p.n])?, mul(&[red, red])?, mul(&[red, p.extra_cols])?]
                .iter()
                .try_fold(0usize, |acc, &x| acc.checked_add(x))
                .ok_or(WireError::TooLarge)?;
            mul(&[ext, elem])?
                .checked_add(mul(&[p.public_len(), p.public_len(), w])?)
                .ok_or(WireError::TooLarge)?
        }
        Kind::Signature => mul(&[p.public_len(), elem])?.checked_add(SEED_BYTES).ok_or(WireError::TooLarge)?,
    };
    Ok(len)
}

/// Encoded size in bytes of a public key or secret key.
pub fn encoded_len(kind: Kind, p: &CodeParams) -> WireResult<usize> {
    let prefix = match kind {
        Kind::Signature => HEADER_LEN,
        _ => HEADER_LEN + PARAMS_LEN,
    };
    body_len(kind, p)?.checked_add(prefix).ok_or(WireError::TooLarge)
}

/// Reads the parameters of a params, public or secret encoding and checks
/// that the total length matches them, without building the field.
pub fn peek_params(bytes: &[u8]) -> WireResult<(Kind, CodeParams)> {
    if bytes.len() < 4 || bytes[..4] != MAGIC {
        return Err(WireError::BadMagic);
    }
    let kind_byte = *bytes.get(5).ok_or(WireError::Truncated {
        needed: HEADER_LEN,
        available: bytes.len(),
    })?;
    let kind = Kind::from_byte(kind_byte).ok_or(WireError::UnknownKind(kind_byte))?;
    if kind == Kind::Signature {
        return Err(WireError::WrongKind {
            expected: Kind::Public,
            found: kind,
        });
    }
    let mut r = open(bytes, kind)?;
    let params = r.params()?;
    let needed = encoded_len(kind, &params)?;
    match bytes.len().cmp(&needed) {
        std::cmp::Ordering::Less => Err(WireError::Truncated {
            needed,
            available: bytes.len(),
        }),
        std::cmp::Ordering::Greater => Err(WireError::TrailingBytes(bytes.len() - needed)),
        std::cmp::Ordering::Equal => Ok((kind, params)),
    }
}

pub fn encode_params(p: &CodeParams) -> Vec<u8> {
    let mut w = Writer::new(Kind::Params, 1);
    w.out.extend_from_slice(&p.to_bytes());
    w.out
}

pub fn decode_params(bytes: &[u8]) -> WireResult<CodeParams> {
    let mut r = open(bytes, Kind::Params)?;
    let p = r.params()?;
    r.finish()?;
    Ok(p)
}

pub fn encode_public(ctx: &FieldContext, pk: &PublicKey) -> Vec<u8> {
    let p = pk.params();
    let mut w = Writer::new(Kind::Public, digit_width(p.q));
    w.out.extend_from_slice(&p.to_bytes());
    w.elems(ctx, pk.matrix().entries());
    w.out.extend_from_slice(&pk.seed_len_bits().to_le_bytes());
    w.out
}

pub fn decode_public(ctx: &FieldContext, bytes: &[u8]) -> WireResult<PublicKey> {
    let mut r = open(bytes, Kind::Public)?;
    let p = r.params()?;
    check_field(ctx, &p)?;
    let needed = encoded_len(Kind::Public, &p)?;
    if bytes.len() < needed {
        return Err(WireError::Truncated {
            needed,
            available: bytes.len(),
        });
    }
    let mut er = ElemReader {
        r,
        ctx,
        width: digit_width(p.q),
    };
    let matrix = er.ext_matrix(p.redundancy(), p.public_len())?;
    let seed_bits = er.r.u16()?;
    er.r.finish()?;
    Ok(PublicKey::new(p, matrix, seed_bits)?)
}

pub fn encode_secret(ctx: &FieldContext, sk: &SecretKey) -> Vec<u8> {
    let p = sk.params();
    let mut w = Writer::new(Kind::Secret, digit_width(p.q));
    w.out.extend_from_slice(&p.to_bytes());
    w.elems(ctx, sk.code().f_basis());
    w.elems(ctx, sk.code().parity_check().entries());
    w.elems(ctx, sk.mixing().entries());
    for &d in sk.permutation().entries() {
        w.digit(d);
    }
    w.elems(ctx, sk.extra_columns().entries());
    w.out
}

/// Decodes a secret key; the inverse formal matrix and the cached inverses
/// are recomputed.
pub fn decode_secret(ctx: &FieldContext, bytes: &[u8]) -> WireResult<SecretKey> {
    let mut r = open(bytes, Kind::Secret)?;
    let p = r.params()?;
    check_field(ctx, &p)?;
    p.validate_for_scheme()?;
    let needed = encoded_len(Kind::Secret, &p)?;
    if bytes.len() < needed {
        return Err(WireError::Truncated {
            needed,
            available: bytes.len(),
        });
    }
    let mut er = ElemReader {
        r,
        ctx,
        width: digit_width(p.q),
    };
    let red = p.redundancy();
    let f_basis = er.elems(p.f_dim)?;
    let h = er.ext_matrix(red, p.n)?;
    let a = er.ext_matrix(red, red)?;
    let perm = er.base_matrix(p.public_len(), p.public_len())?;
    let extra = er.ext_matrix(red, p.extra_cols)?;
    er.r.finish()?;
    let code = LrpcCode::from_parts(ctx, &p, f_basis, h)?;
    Ok(SecretKey::from_parts(ctx, code, a, perm, extra)?)
}

pub fn encode_signature(ctx: &FieldContext, sig: &Signature) -> Vec<u8> {
    let mut w = Writer::new(Kind::Signature, digit_width(ctx.q()));
    w.out.extend_from_slice(&sig.seed);
    w.elems(ctx, &sig.e);
    w.out
}

/// Decodes a signature for the given parameters.
pub fn decode_signature(ctx: &FieldContext, params: &CodeParams, bytes: &[u8]) -> WireResult<Signature> {
    check_field(ctx, params)?;
    let mut r = open(bytes, Kind::Signature)?;
    let needed = encoded_len(Kind::Signature, params)?;
    if bytes.len() < needed {
        return Err(WireError::Truncated {
            needed,
            available: bytes.len(),
        });
    }
    let seed: [u8; SEED_BYTES] = r.take(SEED_BYTES)?.try_into().expect("length checked");
    let mut er = ElemReader {
        r,
        ctx,
        width: digit_width(params.q),
    };
    let e = er.elems(params.public_len())?;
    er.r.finish()?;
    Ok(Signature { seed, e })
}
