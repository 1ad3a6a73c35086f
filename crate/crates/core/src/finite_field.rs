//! Arithmetic modulo an odd prime, quadratic residues, the quadratic
//! extension field, and detection of complete splitting into linear factors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_u64(acc, base, m);
        }
        base = mul_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An odd prime `ell`, checked at construction. All residues handled through
/// it live in `[0, ell)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus {
    ell: u64,
}

impl TryFrom<u64> for PrimeModulus {
    type Error = FieldError;
    fn try_from(ell: u64) -> Result<Self, FieldError> {
        PrimeModulus::new(ell)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(m: PrimeModulus) -> u64 {
        m.ell
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ell)
    }
}

impl PrimeModulus {
    pub fn new(ell: u64) -> Result<Self, FieldError> {
        if ell < 3 || !is_prime(ell) {
            return Err(FieldError::NotOddPrime(ell));
        }
        Ok(PrimeModulus { ell })
    }

    #[inline]
    pub fn ell(self) -> u64 {
        self.ell
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce(self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.ell as i128) as u64
    }

    #[inline]
    pub fn reduce_i128(self, n: i128) -> u64 {
        n.rem_euclid(self.ell as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.ell {
            s - self.ell
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.ell - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.ell - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        mul_u64(a, b, self.ell)
    }

    pub fn pow(self, base: u64, exp: u64) -> u64 {
        pow_u64(base, exp, self.ell)
    }

    /// Inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.ell;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.ell - 2))
        }
    }

    /// Smallest positive quadratic non-residue.
    pub fn smallest_nonresidue(self) -> u64 {
        (2..self.ell)
            .find(|&r| legendre(r as i64, self) == -1)
            .expect("every odd prime has a non-residue")
    }
}

/// Legendre symbol `(n / ell)` by Euler's criterion.
pub fn legendre(n: i64, ell: PrimeModulus) -> i8 {
    let r = ell.reduce(n);
    if r == 0 {
        return 0;
    }
    if ell.pow(r, (ell.ell() - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}

/// Square root modulo `ell` (Tonelli-Shanks). Returns the root lying in
/// `[0, ell/2]`, `Some(0)` for multiples of `ell`, and `None` for non-residues.
pub fn sqrt_mod(n: i64, ell: PrimeModulus) -> Option<u64> {
    sqrt_residue(ell.reduce(n), ell)
}

pub(crate) fn sqrt_residue(a: u64, m: PrimeModulus) -> Option<u64> {
    let p = m.ell();
    if a == 0 {
        return Some(0);
    }
    if m.pow(a, (p - 1) / 2) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        m.pow(a, (p + 1) / 4)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = m.smallest_nonresidue();
        let mut c = m.pow(z, q);
        let mut t = m.pow(a, q);
        let mut r = m.pow(a, (q + 1) / 2);
        let mut ms = s;
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = m.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(ms - i - 1) {
                b = m.mul(b, b);
            }
            ms = i;
            c = m.mul(b, b);
            t = m.mul(t, c);
            r = m.mul(r, b);
        }
        r
    };
    Some(root.min(p - root))
}

/// Dense polynomials over F_ell, coefficients low degree first.
pub(crate) mod poly {
    use super::PrimeModulus;

    pub type Poly = Vec<u64>;

    pub fn trim(f: &mut Poly) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    pub fn degree(f: &Poly) -> Option<usize> {
        if f.is_empty() {
            None
        } else {
            Some(f.len() - 1)
        }
    }

    pub fn rem(f: &Poly, g: &Poly, m: PrimeModulus) -> Poly {
        let mut r = f.clone();
        trim(&mut r);
        let dg = degree(g).expect("division by zero polynomial");
        let lead_inv = m.inv(g[dg]).expect("trimmed leading coefficient");
        while r.len() > dg {
            let dr = r.len() - 1;
            let factor = m.mul(r[dr], lead_inv);
            let shift = dr - dg;
            for (i, &gi) in g.iter().enumerate() {
                r[shift + i] = m.sub(r[shift + i], m.mul(factor, gi));
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(f: &Poly, g: &Poly, modulus: &Poly, m: PrimeModulus) -> Poly {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = m.add(out[i + j], m.mul(a, b));
            }
        }
        rem(&out, modulus, m)
    }

    pub fn pow_mod(base: &Poly, mut exp: u64, modulus: &Poly, m: PrimeModulus) -> Poly {
        let mut acc = rem(&vec![1], modulus, m);
        let mut b = rem(base, modulus, m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(&acc, &b, modulus, m);
            }
            b = mul_mod(&b, &b, modulus, m);
            exp >>= 1;
        }
        acc
    }

    pub fn monic(f: &Poly, m: PrimeModulus) -> Poly {
        let mut f = f.clone();
        trim(&mut f);
        if let Some(&lead) = f.last() {
            let inv = m.inv(lead).expect("nonzero leading coefficient");
            for c in f.iter_mut() {
                *c = m.mul(*c, inv);
            }
        }
        f
    }

    pub fn gcd(f: &Poly, g: &Poly, m: PrimeModulus) -> Poly {
        let mut a = f.clone();
        let mut b = g.clone();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, m);
            a = b;
            b = r;
        }
        monic(&a, m)
    }

    /// `f - g`.
    pub fn sub(f: &Poly, g: &Poly, m: PrimeModulus) -> Poly {
        let n = f.len().max(g.len());
        let mut out: Poly = (0..n)
            .map(|i| m.sub(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
            .collect();
        trim(&mut out);
        out
    }

    /// Synthetic division by `X - root`; the caller guarantees `root` is a root.
    pub fn deflate(f: &Poly, root: u64, m: PrimeModulus) -> Poly {
        let n = f.len();
        let mut out = vec![0u64; n - 1];
        let mut carry = 0u64;
        for i in (1..n).rev() {
            carry = m.add(f[i], m.mul(carry, root));
            out[i - 1] = carry;
        }
        out
    }

    pub fn eval(f: &Poly, x: u64, m: PrimeModulus) -> u64 {
        f.iter().rev().fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// Expands `prod (X - r)` for the given roots.
    pub fn from_roots(roots: &[u64], m: PrimeModulus) -> Poly {
        let mut out: Poly = vec![1];
        for &r in roots {
            let mut next = vec![0u64; out.len() + 1];
            for (i, &c) in out.iter().enumerate() {
                next[i + 1] = m.add(next[i + 1], c);
                next[i] = m.sub(next[i], m.mul(c, r));
            }
            out = next;
        }
        out
    }
}

/// Distinct roots of a squarefree monic polynomial that splits completely,
/// by deterministic equal-degree splitting with shifts `X + a`.
fn split_distinct(h: &poly::Poly, m: PrimeModulus, out: &mut Vec<u64>) {
    match poly::degree(h) {
        None | Some(0) => {}
        Some(1) => out.push(m.neg(m.mul(h[0], m.inv(h[1]).expect("monic")))),
        Some(_) => {
            let half = (m.ell() - 1) / 2;
            for a in 0..m.ell() {
                let shifted = poly::pow_mod(&vec![a, 1], half, h, m);
                let g = poly::gcd(&poly::sub(&shifted, &vec![1], m), h, m);
                let dg = poly::degree(&g).unwrap_or(0);
                if dg > 0 && dg < h.len() - 1 {
                    let (q, _) = div_exact(h, &g, m);
                    split_distinct(&g, m, out);
                    split_distinct(&q, m, out);
                    return;
                }
            }
            unreachable!("a squarefree split polynomial always separates for some shift");
        }
    }
}

fn div_exact(f: &poly::Poly, g: &poly::Poly, m: PrimeModulus) -> (poly::Poly, poly::Poly) {
    let dg = g.len() - 1;
    let lead_inv = m.inv(g[dg]).expect("nonzero");
    let mut r = f.clone();
    let mut q = vec![0u64; f.len().saturating_sub(dg)];
    while r.len() > dg && !r.is_empty() {
        let dr = r.len() - 1;
        let factor = m.mul(r[dr], lead_inv);
        q[dr - dg] = factor;
        for (i, &gi) in g.iter().enumerate() {
            r[dr - dg + i] = m.sub(r[dr - dg + i], m.mul(factor, gi));
        }
        poly::trim(&mut r);
    }
    poly::trim(&mut q);
    (q, r)
}

/// Roots with multiplicity of a monic polynomial (coefficients low degree
/// first, leading 1 implied), if it is a product of linear factors over
/// F_ell. Roots are returned in ascending order.
pub fn linear_roots(lower_coeffs: &[u64], m: PrimeModulus) -> Option<Vec<u64>> {
    let mut f: poly::Poly = lower_coeffs.iter().map(|&c| c % m.ell()).collect();
    f.push(1);
    let n = f.len() - 1;

    // Distinct roots: gcd(f, X^ell - X).
    let frob = poly::pow_mod(&vec![0, 1], m.ell(), &f, m);
    let h = poly::gcd(&f, &poly::sub(&frob, &vec![0, 1], m), m);
    let mut distinct = Vec::new();
    split_distinct(&h, m, &mut distinct);

    let mut roots = Vec::with_capacity(n);
    let mut rest = f;
    for &r in &distinct {
        while rest.len() > 1 && poly::eval(&rest, r, m) == 0 {
            rest = poly::deflate(&rest, r, m);
            roots.push(r);
        }
    }
    if roots.len() == n {
        roots.sort_unstable();
        Some(roots)
    } else {
        None
    }
}

/// Roots with multiplicity of `X^4 + c3 X^3 + c2 X^2 + c1 X + c0` when it
/// splits into linear factors over F_ell.
pub fn quartic_linear_roots(c3: u64, c2: u64, c1: u64, c0: u64, m: PrimeModulus) -> Option<[u64; 4]> {
    linear_roots(&[c0, c1, c2, c3], m).map(|r| [r[0], r[1], r[2], r[3]])
}

/// An element `a + b*sqrt(r)` of F_{ell^2} = F_ell(sqrt(r)), where `r` is the
/// smallest positive non-residue mod ell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtFieldElem {
    a: u64,
    b: u64,
    modulus: PrimeModulus,
    nonresidue: u64,
}

/// The field F_{ell^2} with its fixed non-residue; a factory for elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadExtension {
    modulus: PrimeModulus,
    nonresidue: u64,
}

impl QuadExtension {
    pub fn new(modulus: PrimeModulus) -> Self {
        QuadExtension { modulus, nonresidue: modulus.smallest_nonresidue() }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    pub fn elem(&self, a: i64, b: i64) -> ExtFieldElem {
        ExtFieldElem {
            a: self.modulus.reduce(a),
            b: self.modulus.reduce(b),
            modulus: self.modulus,
            nonresidue: self.nonresidue,
        }
    }

    pub fn zero(&self) -> ExtFieldElem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> ExtFieldElem {
        self.elem(1, 0)
    }

    /// Every element, `a` varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = ExtFieldElem> + '_ {
        let l = self.modulus.ell();
        (0..l).flat_map(move |b| (0..l).map(move |a| self.elem(a as i64, b as i64)))
    }
}

impl ExtFieldElem {
    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn same_field(&self, other: &Self) {
        assert!(
            self.modulus == other.modulus && self.nonresidue == other.nonresidue,
            "{}",
            FieldError::FieldMismatch
        );
    }

    fn with(&self, a: u64, b: u64) -> Self {
        ExtFieldElem { a, b, ..*self }
    }

    /// Norm to F_ell: `a^2 - r b^2`.
    pub fn norm(&self) -> u64 {
        let m = self.modulus;
        m.sub(m.mul(self.a, self.a), m.mul(self.nonresidue, m.mul(self.b, self.b)))
    }

    pub fn conjugate(&self) -> Self {
        self.with(self.a, self.modulus.neg(self.b))
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        let mut acc = self.with(1, 0);
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let n = self.modulus.inv(self.norm()).ok_or(FieldError::ZeroInverse)?;
        let c = self.conjugate();
        Ok(self.with(self.modulus.mul(c.a, n), self.modulus.mul(c.b, n)))
    }

    /// Quadratic character of F_{ell^2}: `z^((ell^2 - 1)/2)` mapped to {-1, 0, 1}.
    pub fn quadratic_character(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let l = self.modulus.ell() as u128;
        let e = self.pow((l * l - 1) / 2);
        if e.a == 1 && e.b == 0 {
            1
        } else {
            -1
        }
    }
}

impl Add for ExtFieldElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let m = self.modulus;
        self.with(m.add(self.a, rhs.a), m.add(self.b, rhs.b))
    }
}

impl Sub for ExtFieldElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let m = self.modulus;
        self.with(m.sub(self.a, rhs.a), m.sub(self.b, rhs.b))
    }
}

impl Neg for ExtFieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        let m = self.modulus;
        self.with(m.neg(self.a), m.neg(self.b))
    }
}

impl Mul for ExtFieldElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let m = self.modulus;
        let a = m.add(m.mul(self.a, rhs.a), m.mul(self.nonresidue, m.mul(self.b, rhs.b)));
        let b = m.add(m.mul(self.a, rhs.b), m.mul(self.b, rhs.a));
        self.with(a, b)
    }
}

impl fmt::Display for ExtFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.nonresidue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(l: u64) -> PrimeModulus {
        PrimeModulus::new(l).unwrap()
    }

    fn square_table(l: u64) -> Vec<bool> {
        let mut t = vec![false; l as usize];
        for x in 1..l {
            t[((x * x) % l) as usize] = true;
        }
        t
    }

    /// Root search oracle: test every residue and divide out linear factors.
    fn roots_by_search(coeffs_low: &[u64], l: u64) -> Option<Vec<u64>> {
        let md = m(l);
        let mut f: Vec<u64> = coeffs_low.to_vec();
        f.push(1);
        let n = f.len() - 1;
        let mut roots = Vec::new();
        for r in 0..l {
            while f.len() > 1 && poly::eval(&f, r, md) == 0 {
                f = poly::deflate(&f, r, md);
                roots.push(r);
            }
        }
        (roots.len() == n).then_some(roots)
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(!is_prime(18_446_744_073_709_551_615));
        assert!(PrimeModulus::new(2).is_err());
        assert!(PrimeModulus::new(9).is_err());
        assert_eq!(PrimeModulus::new(1).unwrap_err(), FieldError::NotOddPrime(1));
    }

    #[test]
    fn legendre_examples() {
        for l in [3, 5, 7, 11, 101] {
            assert_eq!(legendre(1, m(l)), 1);
        }
        assert_eq!(legendre(0, m(5)), 0);
        assert_eq!(legendre(2, m(7)), 1);
        assert_eq!(legendre(3, m(7)), -1);
        assert_eq!(legendre(-3, m(7)), 1);
        assert_eq!(legendre(-10, m(5)), 0);
    }

    #[test]
    fn legendre_matches_squaring_table() {
        for l in (3..=97).filter(|&l| is_prime(l)) {
            let table = square_table(l);
            for n in 0..l {
                let expected = if n == 0 {
                    0
                } else if table[n as usize] {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(n as i64, m(l)), expected, "({n}/{l})");
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod(2, m(7)), Some(3));
        assert_eq!(sqrt_mod(3, m(7)), None);
        assert_eq!(sqrt_mod(0, m(13)), Some(0));
        assert_eq!(sqrt_mod(2, m(17)), Some(6));
    }

    #[test]
    fn sqrt_roundtrip_small_primes() {
        for l in (3..=200).filter(|&l| is_prime(l)) {
            let md = m(l);
            for n in 1..l {
                match sqrt_mod(n as i64, md) {
                    Some(x) => {
                        assert_eq!(md.mul(x, x), n);
                        assert!(x <= l / 2);
                    }
                    None => assert_eq!(legendre(n as i64, md), -1),
                }
            }
        }
    }

    #[test]
    fn quartic_examples() {
        let m5 = m(5);
        assert_eq!(quartic_linear_roots(0, 0, 0, 0, m(7)), Some([0; 4]));
        // (X^2 + 11)^2 = X^4 + 22 X^2 + 121
        assert_eq!(quartic_linear_roots(0, 22 % 5, 0, 121 % 5, m5), Some([2, 2, 3, 3]));
        // (X^2 + 2)^2
        assert_eq!(quartic_linear_roots(0, 4, 0, 4, m5), None);
    }

    #[test]
    fn quartics_agree_with_root_search_exhaustively() {
        for l in [3u64, 5, 7] {
            for c in 0..l.pow(4) {
                let coeffs = [c % l, (c / l) % l, (c / l / l) % l, (c / l / l / l) % l];
                let fast = linear_roots(&coeffs, m(l));
                assert_eq!(fast, roots_by_search(&coeffs, l), "l={l} coeffs={coeffs:?}");
            }
        }
    }

    #[test]
    fn extension_field_axioms_exhaustive() {
        for l in [3u64, 5] {
            let k = QuadExtension::new(m(l));
            let all: Vec<_> = k.elements().collect();
            assert_eq!(all.len() as u64, l * l);
            let s = k.elem(0, 1);
            assert_eq!(s * s, k.elem(k.nonresidue() as i64, 0));
            for &x in &all {
                for &y in &all {
                    assert_eq!(x * y, y * x);
                    for &z in &all {
                        assert_eq!((x * y) * z, x * (y * z));
                    }
                }
                if !x.is_zero() {
                    assert_eq!(x * x.inv().unwrap(), k.one());
                } else {
                    assert!(x.inv().is_err());
                }
            }
        }
    }

    #[test]
    fn character_via_norm_matches_exponentiation() {
        for l in [3u64, 5, 7, 11, 13] {
            let k = QuadExtension::new(m(l));
            for z in k.elements() {
                assert_eq!(z.quadratic_character(), legendre(z.norm() as i64, m(l)), "{z}");
            }
        }
    }

    proptest! {
        #[test]
        fn split_products_are_recovered(l_idx in 0usize..8, r in proptest::collection::vec(0u64..1000, 4)) {
            let l = [3u64, 5, 7, 11, 13, 101, 65_537, 1_000_000_007][l_idx];
            let md = m(l);
            let roots: Vec<u64> = r.iter().map(|x| x % l).collect();
            let f = poly::from_roots(&roots, md);
            let got = quartic_linear_roots(f[3], f[2], f[1], f[0], md).expect("splits");
            let mut want = roots.clone();
            want.sort_unstable();
            prop_assert_eq!(got.to_vec(), want);
            prop_assert_eq!(poly::from_roots(&got, md), f);
        }

        #[test]
        fn sqrt_of_square(l_idx in 0usize..4, x in 1u64..u64::MAX) {
            let l = [65_537u64, 1_000_000_007, 998_244_353, 18_446_744_073_709_551_557][l_idx];
            let md = m(l);
            let x = x % l;
            let sq = md.mul(x, x);
            let root = sqrt_residue(sq, md).unwrap();
            prop_assert_eq!(md.mul(root, root), sq);
            prop_assert!(root == x || root == md.neg(x));
        }
    }
}
