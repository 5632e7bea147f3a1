//! Arithmetic in the base field GF(q) and its degree-m extension GF(q^m).
//!
//! Base fields are binary fields GF(2^a) (a ≤ 63) or small prime fields
//! GF(p). Extension elements are stored as coefficient vectors in the
//! polynomial basis `1, x, ..., x^(m-1)` modulo a monic irreducible
//! polynomial; coordinate maps relative to an arbitrary basis β are provided
//! on top of that representation.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::poly;

/// Minimal field interface shared by GF(q) and GF(q^m) so that the dense
/// linear algebra in [`crate::matrix`] is written once.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

/// Irreducible polynomials (leading bit included) for the binary base
/// fields used by the parameter presets.
const BINARY_MODULI: &[(u32, u64)] = &[
    (1, 0b11),
    (2, 0b111),
    (4, 0x13),
    (6, 0x43),
    (8, 0x11B),
    (16, 0x1002B),
    (40, 0x100_0000_0039),
];

/// Log/antilog tables are only built up to this degree.
const MAX_TABLE_DEGREE: u32 = 16;

#[derive(Clone, Debug)]
struct LogTables {
    log: Vec<u32>,
    // exp[i] = g^i for 0 <= i < 2(q-1), so log sums never need a reduction.
    exp: Vec<u64>,
}

/// The base field GF(q).
#[derive(Clone, Debug)]
pub struct BaseField {
    characteristic: u64,
    degree: u32,
    order: u64,
    // Binary fields: irreducible polynomial with leading bit. Prime fields: p.
    modulus: u64,
    tables: Option<LogTables>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic
            && self.degree == other.degree
            && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn gf2_reduce(mut x: u128, modulus: u64) -> u64 {
    let deg = 63 - modulus.leading_zeros();
    let m = modulus as u128;
    while x >> deg != 0 {
        let top = 127 - x.leading_zeros();
        x ^= m << (top - deg);
    }
    x as u64
}

fn gf2_mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    gf2_reduce(clmul(a, b), modulus)
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = if a == 0 { 0 } else { gf2_reduce(a as u128, b) };
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Rabin's test over GF(2): `f` of degree a is irreducible iff
/// x^(2^a) = x mod f and gcd(x^(2^(a/p)) - x, f) = 1 for each prime p | a.
pub(crate) fn gf2_is_irreducible(f: u64) -> bool {
    if f < 2 {
        return false;
    }
    let a = 63 - f.leading_zeros();
    if a == 0 {
        return false;
    }
    if a == 1 {
        return true;
    }
    let x = 2u64;
    let frob = |k: u32| {
        let mut y = x;
        for _ in 0..k {
            y = gf2_mulmod(y, y, f);
        }
        y
    };
    if frob(a) != x {
        return false;
    }
    prime_factors(a as u64)
        .into_iter()
        .all(|p| gf2_gcd(f, frob(a / p as u32) ^ x) == 1)
}

/// Lowest-weight irreducible of degree a over GF(2); ties broken by the
/// smallest integer encoding.
fn search_binary_modulus(a: u32) -> u64 {
    let top = 1u64 << a;
    for weight in (3..=a + 1).step_by(2) {
        let mut best: Option<u64> = None;
        // Middle terms are chosen among degrees 1..a-1.
        let mut middle = poly::Combinations::new((a - 1) as usize, (weight - 2) as usize);
        while let Some(c) = middle.next_combination() {
            let f = c.iter().fold(top | 1, |acc, &i| acc | (1u64 << (i + 1)));
            if gf2_is_irreducible(f) && best.is_none_or(|b| f < b) {
                best = Some(f);
            }
        }
        if let Some(f) = best {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl BaseField {
    /// GF(2^a) with the tabulated modulus when available, otherwise the
    /// lowest-weight irreducible found by search.
    pub fn binary(a: u32) -> Result<Self> {
        if !(1..=63).contains(&a) {
            return Err(Error::UnsupportedField(format!("GF(2^{a})")));
        }
        let modulus = BINARY_MODULI
            .iter()
            .find(|(deg, _)| *deg == a)
            .map(|&(_, f)| f)
            .unwrap_or_else(|| search_binary_modulus(a));
        Self::binary_with_modulus(modulus)
    }

    pub fn binary_with_modulus(modulus: u64) -> Result<Self> {
        if !gf2_is_irreducible(modulus) {
            return Err(Error::Reducible);
        }
        let degree = 63 - modulus.leading_zeros();
        let mut field = BaseField {
            characteristic: 2,
            degree,
            order: 1u64 << degree,
            modulus,
            tables: None,
        };
        if degree <= MAX_TABLE_DEGREE {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// The prime field GF(p) for an odd prime p < 2^31.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Self::binary(1);
        }
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!("GF({p})")));
        }
        Ok(BaseField {
            characteristic: p,
            degree: 1,
            order: p,
            modulus: p,
            tables: None,
        })
    }

    /// GF(q) for q a power of two or an odd prime.
    pub fn with_order(q: u64) -> Result<Self> {
        if q >= 2 && q.is_power_of_two() {
            Self::binary(q.trailing_zeros())
        } else {
            Self::prime(q)
        }
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order;
        let n = (q - 1) as usize;
        let factors = prime_factors(q - 1);
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&p| self.pow_slow(g, (q - 1) / p) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u64; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = gf2_mulmod(x, generator, self.modulus);
        }
        if n == 0 {
            exp[0] = 1;
        }
        LogTables { log, exp }
    }

    fn pow_slow(&self, mut x: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = gf2_mulmod(acc, x, self.modulus);
            }
            x = gf2_mulmod(x, x, self.modulus);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    /// Degree over the prime field (a for GF(2^a), 1 for GF(p)).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Irreducible polynomial of a binary field, or p for a prime field.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_binary(&self) -> bool {
        self.characteristic == 2
    }

    /// Number of bits needed to hold one element.
    pub fn digit_bits(&self) -> u32 {
        64 - (self.order - 1).leading_zeros()
    }

    /// Bytes per serialized element: ceil(bits / 8).
    pub fn digit_bytes(&self) -> usize {
        (self.digit_bits() as usize).div_ceil(8).max(1)
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.order
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        if self.characteristic == 2 {
            x ^ y
        } else {
            let s = x + y;
            if s >= self.modulus {
                s - self.modulus
            } else {
                s
            }
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if self.characteristic == 2 {
            x ^ y
        } else if x >= y {
            x - y
        } else {
            x + self.modulus - y
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        if self.characteristic == 2 || x == 0 {
            x
        } else {
            self.modulus - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if x == 0 || y == 0 {
            return 0;
        }
        if self.characteristic != 2 {
            return ((x as u128 * y as u128) % self.modulus as u128) as u64;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[x as usize] + t.log[y as usize]) as usize],
            None => gf2_mulmod(x, y, self.modulus),
        }
    }

    pub fn pow(&self, mut x: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            let n = (self.order - 1) as u32;
            return Ok(t.exp[((n - t.log[x as usize]) % n.max(1)) as usize]);
        }
        Ok(self.pow(x, self.order - 2))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.order)
    }
}

impl Field for BaseField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        BaseField::add(self, *x, *y)
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        BaseField::sub(self, *x, *y)
    }
    fn neg(&self, x: &u64) -> u64 {
        BaseField::neg(self, *x)
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        BaseField::mul(self, *x, *y)
    }
    fn inv(&self, x: &u64) -> Result<u64> {
        BaseField::inv(self, *x)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        BaseField::random(self, rng)
    }
}

/// An element of GF(q^m): `m` base-field coefficients in the polynomial
/// basis, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(Vec<u64>);

impl ExtElem {
    pub fn from_coeffs(coeffs: Vec<u64>) -> Self {
        ExtElem(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem{:?}", self.0)
    }
}

/// GF(q^m) over a fixed base field, with a chosen GF(q)-basis β.
#[derive(Clone, Debug)]
pub struct FieldContext {
    base: BaseField,
    m: usize,
    modulus: Vec<u64>,
    // x^m = sum of c_j x^j over these (j, c_j) pairs.
    reduction: Vec<(usize, u64)>,
    beta: Vec<ExtElem>,
    // Polynomial coefficients -> β coordinates; None for the polynomial basis.
    to_beta: Option<Matrix<u64>>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus && self.beta == other.beta
    }
}

impl FieldContext {
    /// GF(q^m) with the searched lowest-weight modulus and polynomial basis.
    pub fn new(base: BaseField, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::UnsupportedField("extension degree 0".into()));
        }
        let modulus = poly::search_irreducible(&base, m);
        Self::with_modulus(base, modulus)
    }

    /// Convenience constructor: GF(q^m) for q a power of two or a prime.
    pub fn with_order(q: u64, m: usize) -> Result<Self> {
        Self::new(BaseField::with_order(q)?, m)
    }

    pub fn with_modulus(base: BaseField, modulus: Vec<u64>) -> Result<Self> {
        let modulus = poly::trimmed(modulus);
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::UnsupportedField(
                "extension modulus must be monic of degree >= 1".into(),
            ));
        }
        if modulus.iter().any(|&c| !base.contains(c)) {
            return Err(Error::UnsupportedField("modulus coefficient out of range".into()));
        }
        if !poly::is_irreducible(&base, &modulus) {
            return Err(Error::Reducible);
        }
        let m = modulus.len() - 1;
        let reduction = modulus[..m]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, base.neg(c)))
            .collect();
        let beta = (0..m)
            .map(|i| {
                let mut c = vec![0; m];
                c[i] = 1;
                ExtElem(c)
            })
            .collect();
        Ok(FieldContext {
            base,
            m,
            modulus,
            reduction,
            beta,
            to_beta: None,
        })
    }

    /// Replace the coordinate basis β. Fails unless `beta` has m
    /// GF(q)-linearly independent elements.
    pub fn with_basis(mut self, beta: Vec<ExtElem>) -> Result<Self> {
        if beta.len() != self.m || beta.iter().any(|b| b.0.len() != self.m) {
            return Err(Error::Dimension(format!("basis must have {} elements", self.m)));
        }
        // Column j holds the polynomial coefficients of β_j.
        let mut cols = Matrix::zeros(self.m, self.m);
        for (j, b) in beta.iter().enumerate() {
            for i in 0..self.m {
                cols[(i, j)] = b.0[i];
            }
        }
        let inv = matrix::invert(&self.base, &cols).map_err(|_| Error::DependentBasis)?;
        self.beta = beta;
        self.to_beta = Some(inv);
        Ok(self)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// Extension degree m.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// Base field order q.
    pub fn q(&self) -> u64 {
        self.base.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn beta(&self) -> &[ExtElem] {
        &self.beta
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.m])
    }

    pub fn one(&self) -> ExtElem {
        self.constant(1)
    }

    /// Embeds a base-field element.
    pub fn constant(&self, c: u64) -> ExtElem {
        let mut v = vec![0; self.m];
        v[0] = c;
        ExtElem(v)
    }

    /// The class of x in GF(q)[x]/(f), i.e. the polynomial-basis generator.
    pub fn generator(&self) -> ExtElem {
        let mut v = vec![0; self.m];
        if self.m > 1 {
            v[1] = 1;
            ExtElem(v)
        } else {
            v[0] = self.base.neg(self.modulus[0]);
            ExtElem(v)
        }
    }

    pub fn is_valid(&self, x: &ExtElem) -> bool {
        x.0.len() == self.m && x.0.iter().all(|&c| self.base.contains(c))
    }

    pub fn add(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        ExtElem(x.0.iter().zip(&y.0).map(|(&a, &b)| self.base.add(a, b)).collect())
    }

    pub fn sub(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        ExtElem(x.0.iter().zip(&y.0).map(|(&a, &b)| self.base.sub(a, b)).collect())
    }

    pub fn neg(&self, x: &ExtElem) -> ExtElem {
        ExtElem(x.0.iter().map(|&a| self.base.neg(a)).collect())
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, c: u64, x: &ExtElem) -> ExtElem {
        ExtElem(x.0.iter().map(|&a| self.base.mul(c, a)).collect())
    }

    /// `acc += c * x` in place.
    pub fn add_scaled(&self, acc: &mut ExtElem, c: u64, x: &ExtElem) {
        if c == 0 {
            return;
        }
        for (a, &b) in acc.0.iter_mut().zip(&x.0) {
            *a = self.base.add(*a, self.base.mul(c, b));
        }
    }

    pub fn mul(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let m = self.m;
        let b = &self.base;
        let mut buf = vec![0u64; 2 * m - 1];
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                if yj != 0 {
                    buf[i + j] = b.add(buf[i + j], b.mul(xi, yj));
                }
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = buf[i];
            if c == 0 {
                continue;
            }
            for &(j, g) in &self.reduction {
                let k = i - m + j;
                buf[k] = b.add(buf[k], b.mul(c, g));
            }
        }
        buf.truncate(m);
        ExtElem(buf)
    }

    pub fn square(&self, x: &ExtElem) -> ExtElem {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &ExtElem, mut e: u64) -> ExtElem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &ExtElem) -> Result<ExtElem> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let inv = poly::inverse_mod(&self.base, &x.0, &self.modulus).ok_or(Error::ZeroInverse)?;
        let mut c = inv;
        c.resize(self.m, 0);
        Ok(ExtElem(c))
    }

    /// Uniform element; consumes m base-field draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        ExtElem((0..self.m).map(|_| self.base.random(rng)).collect())
    }

    /// Coordinates of x in the basis β.
    pub fn to_coords(&self, x: &ExtElem) -> Vec<u64> {
        match &self.to_beta {
            None => x.0.clone(),
            Some(t) => matrix::mul_vec(&self.base, t, &x.0),
        }
    }

    /// Inverse of [`FieldContext::to_coords`].
    pub fn from_coords(&self, coords: &[u64]) -> Result<ExtElem> {
        if coords.len() != self.m {
            return Err(Error::Dimension(format!(
                "expected {} coordinates, got {}",
                self.m,
                coords.len()
            )));
        }
        if coords.iter().any(|&c| !self.base.contains(c)) {
            return Err(Error::Dimension("coordinate outside the base field".into()));
        }
        Ok(self.coords_to_elem(coords))
    }

    pub(crate) fn coords_to_elem(&self, coords: &[u64]) -> ExtElem {
        match &self.to_beta {
            None => ExtElem(coords.to_vec()),
            Some(_) => {
                let mut acc = self.zero();
                for (c, b) in coords.iter().zip(&self.beta) {
                    self.add_scaled(&mut acc, *c, b);
                }
                acc
            }
        }
    }
}

impl Field for FieldContext {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        FieldContext::zero(self)
    }
    fn one(&self) -> ExtElem {
        FieldContext::one(self)
    }
    fn is_zero(&self, x: &ExtElem) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        FieldContext::add(self, x, y)
    }
    fn sub(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        FieldContext::sub(self, x, y)
    }
    fn neg(&self, x: &ExtElem) -> ExtElem {
        FieldContext::neg(self, x)
    }
    fn mul(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        FieldContext::mul(self, x, y)
    }
    fn inv(&self, x: &ExtElem) -> Result<ExtElem> {
        FieldContext::inv(self, x)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        self.sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn gf256_aes() -> FieldContext {
        FieldContext::new(BaseField::binary(8).unwrap(), 1).unwrap()
    }

    /// Bitwise multiplication modulo x^8+x^4+x^3+x+1, independent of the
    /// table-driven path.
    fn aes_mul_reference(mut a: u8, mut b: u8) -> u8 {
        let mut p = 0u8;
        while b != 0 {
            if b & 1 != 0 {
                p ^= a;
            }
            let hi = a & 0x80;
            a <<= 1;
            if hi != 0 {
                a ^= 0x1B;
            }
            b >>= 1;
        }
        p
    }

    #[test]
    fn aes_field_product() {
        let f = gf256_aes();
        let x = f.constant(0x53);
        let y = f.constant(0xCA);
        assert_eq!(f.mul(&x, &y), f.one());
        let base = f.base();
        for a in 0..=255u64 {
            for b in 0..=255u64 {
                assert_eq!(base.mul(a, b), aes_mul_reference(a as u8, b as u8) as u64);
            }
        }
    }

    #[test]
    fn gf4_inverse_of_x() {
        let base = BaseField::binary_with_modulus(0b111).unwrap();
        assert_eq!(base.inv(0b10).unwrap(), 0b11);
        // As a degree-one extension the same holds.
        let f = FieldContext::new(base, 1).unwrap();
        assert_eq!(f.inv(&f.constant(0b10)).unwrap(), f.constant(0b11));
    }

    #[test]
    fn identities_and_zero() {
        let f = FieldContext::with_order(256, 18).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let x = f.sample(&mut rng);
        assert_eq!(f.mul(&x, &f.one()), x);
        assert!(f.mul(&x, &f.zero()).is_zero());
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
        assert_eq!(f.inv(&f.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn tabulated_moduli_are_irreducible() {
        for &(a, f) in BINARY_MODULI {
            assert!(gf2_is_irreducible(f), "a = {a}");
            assert_eq!(63 - f.leading_zeros(), a);
        }
        assert!(!gf2_is_irreducible(0b101)); // x^2 + 1 = (x + 1)^2
    }

    #[test]
    fn searched_binary_modulus() {
        // x^3 + x + 1 is the lowest trinomial of degree 3.
        assert_eq!(search_binary_modulus(3), 0b1011);
        assert_eq!(search_binary_modulus(8) & 1, 1);
        assert!(gf2_is_irreducible(search_binary_modulus(12)));
    }

    #[test]
    fn wide_field_without_tables() {
        let base = BaseField::binary(40).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = base.random(&mut rng);
            if x == 0 {
                continue;
            }
            assert_eq!(base.mul(x, base.inv(x).unwrap()), 1);
        }
        let f = FieldContext::new(base, 18).unwrap();
        let x = f.sample(&mut rng);
        assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
    }

    #[test]
    fn prime_base_field() {
        let f = FieldContext::with_order(3, 6).unwrap();
        assert_eq!(f.q(), 3);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..500 {
            let x = f.sample(&mut rng);
            let y = f.sample(&mut rng);
            assert_eq!(f.sub(&f.add(&x, &y), &y), x);
            if !x.is_zero() {
                assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
            }
        }
        assert!(BaseField::with_order(6).is_err());
        assert!(BaseField::with_order(9).is_err());
    }

    #[test]
    fn unit_vectors_for_basis() {
        let f = FieldContext::with_order(16, 5).unwrap();
        for (j, b) in f.beta().iter().enumerate() {
            let c = f.to_coords(b);
            assert!(c.iter().enumerate().all(|(i, &v)| v == u64::from(i == j)));
        }
        assert_eq!(f.to_coords(&f.zero()), vec![0; 5]);
        assert!(f.from_coords(&[1, 2]).is_err());
    }

    #[test]
    fn custom_basis_round_trip() {
        let f = FieldContext::with_order(4, 6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let g = f.generator();
        // A normal-ish basis: powers of a random unit times powers of x.
        let u = loop {
            let u = f.sample(&mut rng);
            if !u.is_zero() {
                break u;
            }
        };
        let beta: Vec<_> = (0..6).map(|i| f.mul(&u, &f.pow(&g, i))).collect();
        let f2 = f.clone().with_basis(beta.clone()).unwrap();
        for (j, b) in beta.iter().enumerate() {
            let c = f2.to_coords(b);
            assert!(c.iter().enumerate().all(|(i, &v)| v == u64::from(i == j)));
        }
        for _ in 0..200 {
            let x = f2.sample(&mut rng);
            assert_eq!(f2.from_coords(&f2.to_coords(&x)).unwrap(), x);
        }
        let dependent = vec![f.one(); 6];
        assert_eq!(f.with_basis(dependent).unwrap_err(), Error::DependentBasis);
    }

    #[test]
    fn sampling_is_reproducible() {
        let f = FieldContext::with_order(256, 18).unwrap();
        let a = f.sample(&mut ChaCha20Rng::seed_from_u64(42));
        let b = f.sample(&mut ChaCha20Rng::seed_from_u64(42));
        let c = f.sample(&mut ChaCha20Rng::seed_from_u64(43));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_is_uniform_chi_square() {
        // q = 2, m = 4: 16 elements, 10^5 draws.
        let f = FieldContext::with_order(2, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2024);
        let draws = 100_000;
        let mut counts = [0u64; 16];
        for _ in 0..draws {
            let x = f.sample(&mut rng);
            let idx = x.coeffs().iter().rev().fold(0usize, |acc, &c| acc * 2 + c as usize);
            counts[idx] += 1;
        }
        let expected = draws as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 15 degrees of freedom: mean 15, sd sqrt(30); 4 sd above the mean.
        assert!(chi2 < 15.0 + 4.0 * 30f64.sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn independent_streams_uncorrelated() {
        let f = FieldContext::with_order(2, 4).unwrap();
        let mut r1 = ChaCha20Rng::seed_from_u64(100);
        let mut r2 = ChaCha20Rng::seed_from_u64(101);
        let n = 20_000;
        let mut agree = 0;
        for _ in 0..n {
            if f.sample(&mut r1) == f.sample(&mut r2) {
                agree += 1;
            }
        }
        // Agreement probability 1/16 under independence.
        let p = 1.0 / 16.0;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!(((agree as f64) - n as f64 * p).abs() < 4.0 * sd);
    }
}
