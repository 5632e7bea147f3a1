//! Code and scheme parameters, named presets and a `key=value` parser.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::BaseField;

/// Parameters of an augmented LRPC code and the signature scheme built on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    /// Base field order: a power of two, or an odd prime for toy instances.
    pub q: u64,
    /// Extension degree.
    pub m: usize,
    /// Length of the LRPC code.
    pub n: usize,
    /// Dimension of the LRPC code.
    pub k: usize,
    /// Dimension of the parity-check subspace F.
    pub f_dim: usize,
    /// Dimension of the erasure subspace T.
    pub erasure_dim: usize,
    /// Number of random columns appended to the parity-check matrix.
    pub extra_cols: usize,
    /// Support dimension recovered beyond the erasure.
    pub free_dim: usize,
}

impl CodeParams {
    /// Number of syndrome coordinates, `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// Rank of every signature, `t + r'`.
    pub fn rank(&self) -> usize {
        self.erasure_dim + self.free_dim
    }

    /// Length of the public code, `n + t'`.
    pub fn public_len(&self) -> usize {
        self.n + self.extra_cols
    }

    pub fn log2_q(&self) -> f64 {
        (self.q as f64).log2()
    }

    /// Exponent `a` when `q = 2^a`.
    pub fn binary_degree(&self) -> Option<u32> {
        self.q.is_power_of_two().then(|| self.q.trailing_zeros())
    }

    pub fn base_field(&self) -> Result<BaseField> {
        BaseField::with_order(self.q)
    }

    /// Structural checks shared by every consumer.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        self.base_field()?;
        if self.m == 0 || self.n == 0 {
            return bad("m and n must be positive".into());
        }
        if self.k > self.n {
            return bad(format!("k = {} exceeds n = {}", self.k, self.n));
        }
        if self.f_dim == 0 || self.f_dim > self.m {
            return bad(format!("d = {} must lie in 1..={}", self.f_dim, self.m));
        }
        if self.free_dim * self.f_dim > self.redundancy() {
            return bad(format!(
                "r' = {} exceeds (n-k)/d = {}/{}",
                self.free_dim,
                self.redundancy(),
                self.f_dim
            ));
        }
        if self.rank() > self.m {
            return bad(format!("r = {} exceeds m = {}", self.rank(), self.m));
        }
        if self.m > u16::MAX as usize || self.public_len() > u16::MAX as usize {
            return bad("dimensions exceed the 16-bit encoding".into());
        }
        Ok(())
    }

    /// Checks needed to generate a decodable LRPC code for signing.
    pub fn validate_for_scheme(&self) -> Result<()> {
        self.validate()?;
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.f_dim < 2 {
            return bad("the decoder needs d >= 2".into());
        }
        if 2 * self.f_dim - 1 > self.m {
            return bad(format!("2d - 1 = {} exceeds m", 2 * self.f_dim - 1));
        }
        if self.n != self.redundancy() * self.f_dim {
            return bad(format!(
                "n = {} must equal (n-k)*d = {} for a square formal matrix",
                self.n,
                self.redundancy() * self.f_dim
            ));
        }
        if self.free_dim * self.f_dim != self.redundancy() {
            return bad(format!("r' must equal (n-k)/d = {}", self.redundancy() / self.f_dim));
        }
        if self.extra_cols == 0 {
            return bad("t' must be at least 1 to mask the code".into());
        }
        Ok(())
    }

    /// Fixed-width encoding: `a, m, n, k, d, t, t', r'` as little-endian u16.
    /// Odd prime orders are encoded as `0x8000 | p`.
    pub fn to_bytes(&self) -> [u8; 16] {
        let q_field = match self.binary_degree() {
            Some(a) => a as u16,
            None => 0x8000 | self.q as u16,
        };
        let words = [
            q_field,
            self.m as u16,
            self.n as u16,
            self.k as u16,
            self.f_dim as u16,
            self.erasure_dim as u16,
            self.extra_cols as u16,
            self.free_dim as u16,
        ];
        let mut out = [0u8; 16];
        for (chunk, w) in out.chunks_exact_mut(2).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; 16]) -> Result<Self> {
        let w = |i: usize| u16::from_le_bytes([bytes[2 * i], bytes[2 * i + 1]]);
        let q_field = w(0);
        let q = if q_field & 0x8000 != 0 {
            u64::from(q_field & 0x7fff)
        } else if (1..=63).contains(&q_field) {
            1u64 << q_field
        } else {
            return Err(Error::InvalidParams(format!("field code {q_field:#06x}")));
        };
        let p = CodeParams {
            q,
            m: w(1).into(),
            n: w(2).into(),
            k: w(3).into(),
            f_dim: w(4).into(),
            erasure_dim: w(5).into(),
            extra_cols: w(6).into(),
            free_dim: w(7).into(),
        };
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={},m={},n={},k={},d={},t={},t'={},r'={}",
            self.q, self.m, self.n, self.k, self.f_dim, self.erasure_dim, self.extra_cols, self.free_dim
        )
    }
}

/// A named parameter set.
#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub params: CodeParams,
    /// Published algebraic (Gröbner) attack cost, quoted rather than computed.
    pub quoted_lp_bits: Option<&'static str>,
    pub quoted_singleton: Option<usize>,
}

#[allow(clippy::too_many_arguments)]
const fn table_row(
    a: u32,
    m: usize,
    n: usize,
    redundancy: usize,
    d: usize,
    t: usize,
    free: usize,
    extra: usize,
) -> CodeParams {
    CodeParams {
        q: 1 << a,
        m,
        n,
        k: n - redundancy,
        f_dim: d,
        erasure_dim: t,
        extra_cols: extra,
        free_dim: free,
    }
}

const fn toy(q: u64, m: usize, n: usize, k: usize, t: usize, free: usize) -> CodeParams {
    CodeParams {
        q,
        m,
        n,
        k,
        f_dim: 2,
        erasure_dim: t,
        extra_cols: t,
        free_dim: free,
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "row1",
        params: table_row(40, 18, 16, 8, 2, 2, 4, 2),
        quoted_lp_bits: Some("130"),
        quoted_singleton: Some(8),
    },
    Preset {
        name: "row2",
        params: table_row(8, 18, 16, 8, 2, 2, 4, 2),
        quoted_lp_bits: Some("110"),
        quoted_singleton: Some(8),
    },
    Preset {
        name: "row3",
        params: table_row(16, 18, 16, 8, 2, 2, 4, 2),
        quoted_lp_bits: Some("120"),
        quoted_singleton: Some(8),
    },
    Preset {
        name: "row4",
        params: table_row(8, 24, 20, 10, 2, 3, 5, 3),
        quoted_lp_bits: Some("190"),
        quoted_singleton: Some(10),
    },
    Preset {
        name: "row5",
        params: table_row(6, 20, 27, 9, 3, 2, 3, 2),
        quoted_lp_bits: Some("170"),
        quoted_singleton: Some(7),
    },
    Preset {
        name: "row6",
        params: table_row(4, 40, 48, 12, 4, 5, 3, 5),
        quoted_lp_bits: Some(">600"),
        quoted_singleton: Some(10),
    },
    Preset {
        name: "row7",
        params: table_row(4, 42, 50, 10, 5, 5, 2, 2),
        quoted_lp_bits: Some(">600"),
        quoted_singleton: Some(9),
    },
    Preset {
        name: "toy-q2",
        params: toy(2, 6, 4, 2, 1, 1),
        quoted_lp_bits: None,
        quoted_singleton: None,
    },
    Preset {
        name: "toy-q3",
        params: toy(3, 6, 4, 2, 1, 1),
        quoted_lp_bits: None,
        quoted_singleton: None,
    },
    Preset {
        name: "toy-q16",
        params: toy(16, 9, 8, 4, 1, 2),
        quoted_lp_bits: None,
        quoted_singleton: None,
    },
];

/// Looks up a preset by name; `table1-rowN` is accepted as an alias of `rowN`.
pub fn preset(name: &str) -> Option<&'static Preset> {
    let name = name.trim().to_ascii_lowercase();
    let name = name.strip_prefix("table1-").unwrap_or(&name);
    PRESETS.iter().find(|p| p.name == name)
}

/// The preset whose parameters equal `params`, if any.
pub fn preset_for(params: &CodeParams) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.params == *params)
}

/// Parses `preset`, `preset,key=value,...` or a full `key=value,...` list.
///
/// Keys: `q` (or `a` for `q = 2^a`), `m`, `n`, `k`, `d`, `t`, `t'`
/// (alias `tp`), `r'` (alias `rp`). Without a preset every key except
/// `t'` (defaulting to `t`) is required.
impl FromStr for CodeParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParams(msg);
        let mut tokens = s.split(',').map(str::trim).filter(|t| !t.is_empty()).peekable();
        let mut fields: [Option<u64>; 8] = [None; 8];
        let mut base = None;
        if let Some(first) = tokens.peek() {
            if !first.contains('=') {
                let p = preset(first).ok_or_else(|| bad(format!("unknown preset `{first}`")))?;
                base = Some(p.params);
                tokens.next();
            }
        }
        for token in tokens {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{token}`")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| bad(format!("`{value}` is not an integer")))?;
            let slot = match key.trim() {
                "q" => 0,
                "a" => {
                    if !(1..=63).contains(&value) {
                        return Err(bad(format!("a = {value} out of range")));
                    }
                    fields[0] = Some(1 << value);
                    continue;
                }
                "m" => 1,
                "n" => 2,
                "k" => 3,
                "d" => 4,
                "t" => 5,
                "t'" | "tp" => 6,
                "r'" | "rp" => 7,
                other => return Err(bad(format!("unknown key `{other}`"))),
            };
            fields[slot] = Some(value);
        }
        let as_usize = |v: u64| usize::try_from(v).map_err(|_| bad(format!("{v} too large")));
        let params = match base {
            Some(b) => CodeParams {
                q: fields[0].unwrap_or(b.q),
                m: fields[1].map(as_usize).transpose()?.unwrap_or(b.m),
                n: fields[2].map(as_usize).transpose()?.unwrap_or(b.n),
                k: fields[3].map(as_usize).transpose()?.unwrap_or(b.k),
                f_dim: fields[4].map(as_usize).transpose()?.unwrap_or(b.f_dim),
                erasure_dim: fields[5].map(as_usize).transpose()?.unwrap_or(b.erasure_dim),
                extra_cols: fields[6].map(as_usize).transpose()?.unwrap_or(b.extra_cols),
                free_dim: fields[7].map(as_usize).transpose()?.unwrap_or(b.free_dim),
            },
            None => {
                const NAMES: [&str; 8] = ["q", "m", "n", "k", "d", "t", "t'", "r'"];
                let get = |i: usize| {
                    fields[i]
                        .ok_or_else(|| bad(format!("missing `{}`", NAMES[i])))
                        .and_then(as_usize)
                };
                let t = get(5)?;
                CodeParams {
                    q: fields[0].ok_or_else(|| bad("missing `q`".into()))?,
                    m: get(1)?,
                    n: get(2)?,
                    k: get(3)?,
                    f_dim: get(4)?,
                    erasure_dim: t,
                    extra_cols: fields[6].map(as_usize).transpose()?.unwrap_or(t),
                    free_dim: get(7)?,
                }
            }
        };
        params.validate()?;
        Ok(params)
    }
}
