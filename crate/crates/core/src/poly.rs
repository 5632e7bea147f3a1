//! Dense univariate polynomials over a base field, coefficients lowest
//! degree first. Only what extension-field construction needs.

use crate::field::BaseField;

/// Largest coefficient value tried when searching for an irreducible
/// modulus over a large base field.
const COEFF_CAP: u64 = 16;

pub(crate) fn trimmed(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn degree(p: &[u64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

fn mul(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trimmed(out)
}

fn sub(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trimmed(out)
}

/// Quotient and remainder of `a / b`; `b` must be nonzero.
fn divrem(f: &BaseField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = trimmed(a.to_vec());
    let mut quo = vec![0; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - db;
        quo[shift] = c;
        for (i, &bi) in b[..=db].iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        r = trimmed(r);
    }
    (trimmed(quo), r)
}

fn rem(f: &BaseField, a: &[u64], m: &[u64]) -> Vec<u64> {
    divrem(f, a, m).1
}

fn mulmod(f: &BaseField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem(f, &mul(f, a, b), m)
}

fn powmod(f: &BaseField, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1];
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn gcd(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trimmed(a.to_vec());
    let mut b = trimmed(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or's irreducibility test for a monic `poly` over GF(q): no factor
/// of degree i divides it for i up to half its degree.
pub(crate) fn is_irreducible(f: &BaseField, poly: &[u64]) -> bool {
    let Some(n) = degree(poly) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    let q = f.order();
    let x = rem(f, &[0, 1], poly);
    let mut frob = x.clone();
    for _ in 1..=n / 2 {
        frob = powmod(f, &frob, q, poly);
        let g = gcd(f, &sub(f, &frob, &x), poly);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Inverse of `a` modulo `m`, if gcd(a, m) = 1.
pub(crate) fn inverse_mod(f: &BaseField, a: &[u64], m: &[u64]) -> Option<Vec<u64>> {
    let mut r0 = trimmed(m.to_vec());
    let mut r1 = rem(f, a, m);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (quo, r) = divrem(f, &r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = sub(f, &s0, &mul(f, &quo, &s1));
        s0 = std::mem::replace(&mut s1, s);
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = f.inv(r0[0]).ok()?;
    Some(trimmed(s0.iter().map(|&v| f.mul(v, c)).collect()))
}

/// k-subsets of `0..n` in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    pub(crate) fn next_combination(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}

/// Odometer step over `1..=cap` with the last entry moving fastest;
/// returns false once every tuple has been visited.
fn advance(coeffs: &mut [u64], cap: u64) -> bool {
    for i in (0..coeffs.len()).rev() {
        if coeffs[i] < cap {
            coeffs[i] += 1;
            for c in &mut coeffs[i + 1..] {
                *c = 1;
            }
            return true;
        }
    }
    false
}

/// Monic irreducible of degree `m` over GF(q) of lowest weight.
///
/// Candidates are `x^m + c_0 + sum c_j x^j`: by weight, then by the
/// positions of the middle terms (lexicographic), then by the coefficient
/// tuple `(c_0, c_j1, ...)` (lexicographic, values in `1..=min(q-1, 16)`).
pub(crate) fn search_irreducible(f: &BaseField, m: usize) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1];
    }
    let cap = (f.order() - 1).min(COEFF_CAP);
    for weight in 2..=m + 1 {
        let middle = weight - 2;
        let mut positions = Combinations::new(m - 1, middle);
        while let Some(pos) = positions.next_combination() {
            let pos: Vec<usize> = pos.iter().map(|&p| p + 1).collect();
            let mut coeffs = vec![1u64; middle + 1];
            loop {
                let mut cand = vec![0u64; m + 1];
                cand[m] = 1;
                cand[0] = coeffs[0];
                for (&p, &c) in pos.iter().zip(&coeffs[1..]) {
                    cand[p] = c;
                }
                if is_irreducible(f, &cand) {
                    return cand;
                }
                if !advance(&mut coeffs, cap) {
                    break;
                }
            }
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = Combinations::new(4, 2);
        let mut all = Vec::new();
        while let Some(s) = c.next_combination() {
            all.push(s.to_vec());
        }
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut empty = Combinations::new(3, 0);
        assert_eq!(empty.next_combination(), Some(&[][..]));
        assert_eq!(empty.next_combination(), None);
    }

    #[test]
    fn irreducibility_over_gf3() {
        let f = BaseField::prime(3).unwrap();
        // x^2 + 1 is irreducible over GF(3); x^2 - 1 = (x-1)(x+1) is not.
        assert!(is_irreducible(&f, &[1, 0, 1]));
        assert!(!is_irreducible(&f, &[2, 0, 1]));
        let found = search_irreducible(&f, 6);
        assert_eq!(found.len(), 7);
        assert!(is_irreducible(&f, &found));
    }

    #[test]
    fn no_binomial_for_even_degree_over_gf256() {
        // 2 does not divide 255, so no x^18 + c is irreducible: the search
        // must return a trinomial.
        let f = BaseField::binary(8).unwrap();
        let p = search_irreducible(&f, 18);
        assert_eq!(p.iter().filter(|&&c| c != 0).count(), 3);
    }

    #[test]
    fn modular_inverse() {
        let f = BaseField::binary(4).unwrap();
        let m = search_irreducible(&f, 5);
        let a = vec![3, 0, 7, 1];
        let inv = inverse_mod(&f, &a, &m).unwrap();
        assert_eq!(mulmod(&f, &a, &inv, &m), vec![1]);
        assert!(inverse_mod(&f, &[], &m).is_none());
    }
}
