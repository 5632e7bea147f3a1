//! Attack-cost estimates, key and signature sizes, and the Table-1-style
//! parameter report.
//!
//! Every cost is a base-2 logarithm. Exponents are assembled exactly and only
//! the final value is converted to a float.

use std::fmt;

use num_bigint::BigUint;

use crate::bounds::{ball_size, density_exponent, gvr, singleton};
use crate::params::{preset_for, CodeParams};
use crate::wire::{encoded_len, Kind};

/// Attacks below this many bits are marked in reports.
pub const MARK_BELOW_BITS: f64 = 128.0;
/// Any attack below this many bits triggers a toy-parameter warning.
pub const TOY_BELOW_BITS: f64 = 80.0;

fn log2_q(q: u64) -> f64 {
    (q as f64).log2()
}

/// `log2` of an arbitrarily large integer.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// Public key and signature sizes in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sizes {
    pub pk_bits: u64,
    pub sig_bits: u64,
}

/// `(k+t')(n-k) m log2 q` and `(m+n+t') r log2 q`, rounded up when `q` is
/// not a power of two.
pub fn sizes(p: &CodeParams) -> Sizes {
    let pk_symbols = ((p.k + p.extra_cols) * p.redundancy() * p.m) as u64;
    let sig_symbols = ((p.m + p.n + p.extra_cols) * p.rank()) as u64;
    match p.binary_degree() {
        Some(a) => Sizes {
            pk_bits: pk_symbols * u64::from(a),
            sig_bits: sig_symbols * u64::from(a),
        },
        None => {
            let l = p.log2_q();
            Sizes {
                pk_bits: (pk_symbols as f64 * l).ceil() as u64,
                sig_bits: (sig_symbols as f64 * l).ceil() as u64,
            }
        }
    }
}

fn combinatorial(n: usize, k: usize, m: usize, q: u64, r: usize, exponent: f64) -> f64 {
    let red = (n - k).max(1) as f64;
    3.0 * red.log2() + 3.0 * (m as f64).log2() + r.saturating_sub(1) as f64 * exponent * log2_q(q)
}

/// `log2((n-k)^3 m^3 q^{(r-1) floor((k+1)m/n)})`.
pub fn combinatorial_attack_bits(n: usize, k: usize, m: usize, q: u64, r: usize) -> f64 {
    combinatorial(n, k, m, q, r, ((k + 1) * m / n) as f64)
}

/// The same cost with the exponent `(k+1)m/n` left unrounded.
pub fn combinatorial_attack_bits_exact(n: usize, k: usize, m: usize, q: u64, r: usize) -> f64 {
    combinatorial(n, k, m, q, r, ((k + 1) * m) as f64 / n as f64)
}

/// `log2` of the expected number of rank-`r` preimages of a syndrome,
/// clamped below at zero.
pub fn solution_count_bits(n: usize, k: usize, m: usize, q: u64, r: usize) -> f64 {
    let ball = log2_big(&ball_size(n, m, q, r));
    (ball - (m * (n - k)) as f64 * log2_q(q)).max(0.0)
}

/// Cost of finding a rank-`r` preimage: the combinatorial cost divided by
/// the number of solutions, floored at zero.
pub fn forgery_attack_bits(n: usize, k: usize, m: usize, q: u64, r: usize) -> f64 {
    (combinatorial_attack_bits_exact(n, k, m, q, r) - solution_count_bits(n, k, m, q, r)).max(0.0)
}

/// `ceil(m(n-k)/n)`: App-RSD at rank `r` is easy iff `r` reaches it.
pub fn app_rsd_threshold(n: usize, k: usize, m: usize) -> usize {
    (m * (n - k)).div_ceil(n)
}

pub fn app_rsd_is_easy(n: usize, k: usize, m: usize, r: usize) -> bool {
    r >= app_rsd_threshold(n, k, m)
}

/// Differential support attack: `((n-k)(d-1) + t) log2 q`.
pub fn ds_attack_bits(p: &CodeParams) -> f64 {
    ((p.redundancy() * (p.f_dim - 1) + p.erasure_dim) as f64) * log2_q(p.q)
}

/// Recovering the isometry `P`: `(n-k+3) t' log2 q`.
pub fn isometry_attack_bits(p: &CodeParams) -> f64 {
    ((p.redundancy() + 3) * p.extra_cols) as f64 * log2_q(p.q)
}

/// Guessing an element of `F` then decoding: `m log2 q + 3 log2(n d)`.
pub fn support_guess_bits(p: &CodeParams) -> f64 {
    p.m as f64 * log2_q(p.q) + 3.0 * ((p.n * p.f_dim) as f64).log2()
}

/// Searching for the rank `d+t'` words of the public code through its dual,
/// an `[n+t', n-k]` code.
pub fn dual_attack_bits(p: &CodeParams) -> f64 {
    combinatorial_attack_bits_exact(p.public_len(), p.redundancy(), p.m, p.q, p.f_dim + p.extra_cols)
}

/// Forging directly: a rank-`r` preimage for the `[n+t', k+t']` public code.
pub fn direct_forgery_bits(p: &CodeParams) -> f64 {
    forgery_attack_bits(p.public_len(), p.k + p.extra_cols, p.m, p.q, p.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attack {
    Dual,
    DifferentialSupport,
    DirectForgery,
    Isometry,
    SupportGuess,
}

impl Attack {
    pub const ALL: [Attack; 5] = [
        Attack::Dual,
        Attack::DifferentialSupport,
        Attack::DirectForgery,
        Attack::Isometry,
        Attack::SupportGuess,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Attack::Dual => "dual",
            Attack::DifferentialSupport => "ds",
            Attack::DirectForgery => "da",
            Attack::Isometry => "isometry",
            Attack::SupportGuess => "support_guess",
        }
    }

    pub fn bits(self, p: &CodeParams) -> f64 {
        match self {
            Attack::Dual => dual_attack_bits(p),
            Attack::DifferentialSupport => ds_attack_bits(p),
            Attack::DirectForgery => direct_forgery_bits(p),
            Attack::Isometry => isometry_attack_bits(p),
            Attack::SupportGuess => support_guess_bits(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecurityReport {
    pub params: CodeParams,
    pub preset: Option<&'static str>,
    pub pk_bits: u64,
    pub sig_bits: u64,
    /// Bytes of the encoded public key, which stores the full matrix.
    pub pk_encoded_bytes: usize,
    /// GVR and Singleton bounds of the `[n+t', k+t']` public code.
    pub gvr: usize,
    pub singleton: usize,
    /// The Singleton value printed alongside the preset, when it differs.
    pub quoted_singleton: Option<usize>,
    pub density_exp: i64,
    pub app_rsd_threshold: usize,
    pub attack_bits: Vec<(Attack, f64)>,
    pub best_attack: Attack,
    pub quoted_lp: Option<&'static str>,
}

impl SecurityReport {
    pub fn bits(&self, attack: Attack) -> f64 {
        self.attack_bits
            .iter()
            .find(|(a, _)| *a == attack)
            .map(|&(_, b)| b)
            .expect("every attack is estimated")
    }

    pub fn best_bits(&self) -> f64 {
        self.bits(self.best_attack)
    }

    pub fn signature_rank_is_hard(&self) -> bool {
        self.params.rank() < self.app_rsd_threshold
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.best_bits() < TOY_BELOW_BITS {
            out.push(format!(
                "toy parameters: best attack {} costs {:.1} bits",
                self.best_attack.key(),
                self.best_bits()
            ));
        }
        if !self.signature_rank_is_hard() {
            out.push(format!(
                "signature rank {} reaches the App-RSD threshold {}",
                self.params.rank(),
                self.app_rsd_threshold
            ));
        }
        if let Some(s) = self.quoted_singleton {
            out.push(format!("Singleton bound {} differs from the quoted {}", self.singleton, s));
        }
        out
    }

    /// Stable `key=value` lines.
    pub fn machine_lines(&self) -> String {
        let p = &self.params;
        let mut lines = vec![
            format!("params={p}"),
            format!("preset={}", self.preset.unwrap_or("none")),
            format!("pk_bits={}", self.pk_bits),
            format!("sig_bits={}", self.sig_bits),
            format!("pk_encoded_bytes={}", self.pk_encoded_bytes),
            format!("gvr={}", self.gvr),
            format!("singleton={}", self.singleton),
            format!("density_exp={}", self.density_exp),
            format!("app_rsd_threshold={}", self.app_rsd_threshold),
        ];
        for (a, b) in &self.attack_bits {
            lines.push(format!("{}={:.1}", a.key(), b));
        }
        lines.push(format!("best_attack={}", self.best_attack.key()));
        lines.push(format!("lp={}", self.quoted_lp.map_or("external".to_string(), |v| format!("{v} (quoted)"))));
        lines.join("\n")
    }
}

impl fmt::Display for SecurityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parameters    {}", self.params)?;
        if let Some(name) = self.preset {
            writeln!(f, "preset        {name}")?;
        }
        writeln!(f, "public key    {} bits ({} bytes encoded)", self.pk_bits, self.pk_encoded_bytes)?;
        writeln!(f, "signature     {} bits", self.sig_bits)?;
        writeln!(f, "GVR           {}", self.gvr)?;
        writeln!(f, "Singleton     {}", self.singleton)?;
        writeln!(f, "density       q^{}", self.density_exp)?;
        writeln!(f, "App-RSD       easy from rank {}", self.app_rsd_threshold)?;
        for (a, b) in &self.attack_bits {
            let mark = if *a == self.best_attack {
                " <- best"
            } else if *b < MARK_BELOW_BITS {
                " *"
            } else {
                ""
            };
            writeln!(f, "{:<14}{:.1} bits{mark}", a.key(), b)?;
        }
        match self.quoted_lp {
            Some(v) => writeln!(f, "lp            {v} bits (quoted, not computed)")?,
            None => writeln!(f, "lp            external estimator")?,
        }
        for w in self.warnings() {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn full_report(p: &CodeParams) -> SecurityReport {
    let sz = sizes(p);
    let attack_bits: Vec<(Attack, f64)> = Attack::ALL.iter().map(|&a| (a, a.bits(p))).collect();
    let best_attack = attack_bits
        .iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|&(a, _)| a)
        .expect("nonempty");
    let found = preset_for(p);
    let (len, dim) = (p.public_len(), p.k + p.extra_cols);
    let singleton = singleton(len, dim, p.m);
    SecurityReport {
        params: *p,
        preset: found.map(|x| x.name),
        pk_bits: sz.pk_bits,
        sig_bits: sz.sig_bits,
        pk_encoded_bytes: encoded_len(Kind::Public, p).unwrap_or(usize::MAX),
        gvr: gvr(len, dim, p.m, p.q),
        singleton,
        quoted_singleton: found.and_then(|x| x.quoted_singleton).filter(|&s| s != singleton),
        density_exp: density_exponent(p),
        app_rsd_threshold: app_rsd_threshold(len, dim, p.m),
        attack_bits,
        best_attack,
        quoted_lp: found.and_then(|x| x.quoted_lp_bits),
    }
}
