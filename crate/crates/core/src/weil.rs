//! Frobenius quartics of abelian surfaces over F_q: validation, the
//! discriminant, p-rank, supersingular classification and factorization over
//! a real quadratic field.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(i64),
    #[error("p = {0} is not prime")]
    NotPrime(i64),
    #[error("exponent k must be at least 1")]
    ZeroExponent,
    #[error("q = p^k overflows")]
    Overflow,
    #[error("({a1}, {a2}) is not a Weil quartic for q = {q}")]
    NotWeil { a1: i64, a2: i64, q: i64 },
    #[error("supersingular classification needs a prime p >= 7 and k = 1, got p = {p}, k = {k}")]
    UnsupportedRange { p: i64, k: u32 },
    #[error("d = {0} is not a squarefree integer > 1")]
    NotSquarefree(i64),
    #[error("(u, v) = ({u}, {v}) is not integral for d = {d}")]
    NotIntegral { d: i64, u: i64, v: i64 },
}

/// `q = p^k`, or `None` on overflow.
fn prime_power_value(p: i64, k: u32) -> Option<i64> {
    p.checked_pow(k)
}

/// Writes `q = p^k` with `p` prime, if possible.
pub fn prime_power(q: i64) -> Option<(i64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2i64;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 || p * p > q {
        // q itself is prime
        return Some((q, 1));
    }
    let mut n = q;
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

/// Exact test that `Y^2 + a1 Y + (a2 - 2q)` has both roots real and inside
/// `[-2 sqrt q, 2 sqrt q]`.
fn weil_bounds_hold(a1: i64, a2: i64, q: i64) -> bool {
    let (a1, a2, q) = (a1 as i128, a2 as i128, q as i128);
    let shifted = a2 + 2 * q;
    a1 * a1 <= 16 * q
        && a1 * a1 - 4 * a2 + 8 * q >= 0
        && shifted >= 0
        && shifted * shifted >= 4 * a1 * a1 * q
}

/// Whether `X^4 + a1 X^3 + a2 X^2 + q a1 X + q^2` is a q-Weil polynomial.
pub fn validate_weil(a1: i64, a2: i64, q: i64) -> Result<bool, WeilError> {
    prime_power(q).ok_or(WeilError::NotPrimePower(q))?;
    Ok(weil_bounds_hold(a1, a2, q))
}

/// The quartic `X^4 + a1 X^3 + a2 X^2 + q a1 X + q^2` with `q = p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeilQuartic {
    a1: i64,
    a2: i64,
    p: i64,
    k: u32,
}

impl WeilQuartic {
    pub fn new(a1: i64, a2: i64, p: i64, k: u32) -> Result<Self, WeilError> {
        if k == 0 {
            return Err(WeilError::ZeroExponent);
        }
        if p < 2 || !is_prime(p as u64) {
            return Err(WeilError::NotPrime(p));
        }
        let q = prime_power_value(p, k).ok_or(WeilError::Overflow)?;
        if q.checked_mul(q).is_none() {
            return Err(WeilError::Overflow);
        }
        if !weil_bounds_hold(a1, a2, q) {
            return Err(WeilError::NotWeil { a1, a2, q });
        }
        Ok(WeilQuartic { a1, a2, p, k })
    }

    /// Over a prime field.
    pub fn prime(a1: i64, a2: i64, p: i64) -> Result<Self, WeilError> {
        Self::new(a1, a2, p, 1)
    }

    pub fn a1(&self) -> i64 {
        self.a1
    }

    pub fn a2(&self) -> i64 {
        self.a2
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> i64 {
        self.p.pow(self.k)
    }

    /// Frobenius trace `-a1`.
    pub fn trace(&self) -> i64 {
        -self.a1
    }

    /// Integer coefficients, leading term first.
    pub fn coefficients(&self) -> [i128; 5] {
        let q = self.q() as i128;
        [1, self.a1 as i128, self.a2 as i128, q * self.a1 as i128, q * q]
    }
}

impl fmt::Display for WeilQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.q();
        write!(f, "X^4 + ({})X^3 + ({})X^2 + ({})X + {}", self.a1, self.a2, q * self.a1, q * q)
    }
}

/// `a1^2 - 4 a2 + 8q`.
pub fn discriminant(w: &WeilQuartic) -> i64 {
    w.a1 * w.a1 - 4 * w.a2 + 8 * w.q()
}

/// Number of unit roots of the quartic mod p, read off from
/// `X^2 (X^2 + a1 X + a2)`.
pub fn p_rank(w: &WeilQuartic) -> u8 {
    let p = w.p;
    if w.a2 % p != 0 {
        2
    } else if w.a1 % p != 0 {
        1
    } else {
        0
    }
}

/// Middle coefficient of a simple supersingular template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimpleVariant {
    /// `X^4 + p X^2 + p^2`
    PlusP,
    /// `X^4 - p X^2 + p^2`
    MinusP,
    /// `X^4 + p^2`
    Zero,
    /// `(X^2 - p)^2`
    MinusTwoP,
}

impl SimpleVariant {
    pub const ALL: [SimpleVariant; 4] =
        [SimpleVariant::PlusP, SimpleVariant::MinusP, SimpleVariant::Zero, SimpleVariant::MinusTwoP];

    /// `a2` as a multiple of p.
    pub fn a2_multiple(self) -> i64 {
        match self {
            SimpleVariant::PlusP => 1,
            SimpleVariant::MinusP => -1,
            SimpleVariant::Zero => 0,
            SimpleVariant::MinusTwoP => -2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceClass {
    Ordinary,
    PRankOne,
    SimpleSS(SimpleVariant),
    SplitSS,
    NotSS,
}

impl SurfaceClass {
    pub fn is_supersingular(self) -> bool {
        matches!(self, SurfaceClass::SimpleSS(_) | SurfaceClass::SplitSS)
    }

    /// Label used in census tables.
    pub fn name(self) -> &'static str {
        match self {
            SurfaceClass::Ordinary => "ordinary",
            SurfaceClass::PRankOne => "prank1",
            SurfaceClass::SimpleSS(SimpleVariant::PlusP) => "ss_simple_pp",
            SurfaceClass::SimpleSS(SimpleVariant::MinusP) => "ss_simple_mp",
            SurfaceClass::SimpleSS(SimpleVariant::Zero) => "ss_simple_0",
            SurfaceClass::SimpleSS(SimpleVariant::MinusTwoP) => "ss_simple_m2p",
            SurfaceClass::SplitSS => "ss_split",
            SurfaceClass::NotSS => "not_ss",
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown surface class `{0}`")]
pub struct UnknownClass(pub String);

impl FromStr for SurfaceClass {
    type Err = UnknownClass;
    fn from_str(s: &str) -> Result<Self, UnknownClass> {
        Ok(match s {
            "ordinary" => SurfaceClass::Ordinary,
            "prank1" => SurfaceClass::PRankOne,
            "ss_simple_pp" => SurfaceClass::SimpleSS(SimpleVariant::PlusP),
            "ss_simple_mp" => SurfaceClass::SimpleSS(SimpleVariant::MinusP),
            "ss_simple_0" => SurfaceClass::SimpleSS(SimpleVariant::Zero),
            "ss_simple_m2p" => SurfaceClass::SimpleSS(SimpleVariant::MinusTwoP),
            "ss_split" => SurfaceClass::SplitSS,
            "not_ss" => SurfaceClass::NotSS,
            other => return Err(UnknownClass(other.to_string())),
        })
    }
}

/// Matches the quartic against the five supersingular templates over F_p.
pub fn classify_supersingular(w: &WeilQuartic) -> Result<SurfaceClass, WeilError> {
    if w.k != 1 || w.p < 7 {
        return Err(WeilError::UnsupportedRange { p: w.p, k: w.k });
    }
    if w.a1 != 0 {
        return Ok(SurfaceClass::NotSS);
    }
    let p = w.p;
    if w.a2 == 2 * p {
        return Ok(SurfaceClass::SplitSS);
    }
    Ok(SimpleVariant::ALL
        .into_iter()
        .find(|v| v.a2_multiple() * p == w.a2)
        .map_or(SurfaceClass::NotSS, SurfaceClass::SimpleSS))
}

/// Supersingular classification, with non-supersingular quartics refined to
/// ordinary or p-rank one.
pub fn classify(w: &WeilQuartic) -> Result<SurfaceClass, WeilError> {
    let cls = classify_supersingular(w)?;
    if cls != SurfaceClass::NotSS {
        return Ok(cls);
    }
    Ok(match p_rank(w) {
        2 => SurfaceClass::Ordinary,
        1 => SurfaceClass::PRankOne,
        _ => SurfaceClass::NotSS,
    })
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n % (f * f) == 0 {
            return false;
        }
        if n % f == 0 {
            n /= f;
        }
        f += 1;
    }
    true
}

/// `(u + v sqrt d) / 2` in the ring of integers of `Q(sqrt d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadFieldElem {
    d: i64,
    u: i64,
    v: i64,
}

impl QuadFieldElem {
    pub fn new(d: i64, u: i64, v: i64) -> Result<Self, WeilError> {
        if d <= 1 || !is_squarefree(d) {
            return Err(WeilError::NotSquarefree(d));
        }
        let integral = if d.rem_euclid(4) == 1 {
            (u - v).rem_euclid(2) == 0
        } else {
            u.rem_euclid(2) == 0 && v.rem_euclid(2) == 0
        };
        if !integral {
            return Err(WeilError::NotIntegral { d, u, v });
        }
        Ok(QuadFieldElem { d, u, v })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    pub fn trace(&self) -> i64 {
        self.u
    }

    pub fn norm(&self) -> i64 {
        let (u, v, d) = (self.u as i128, self.v as i128, self.d as i128);
        ((u * u - d * v * v) / 4) as i64
    }

    pub fn conjugate(&self) -> Self {
        QuadFieldElem { v: -self.v, ..*self }
    }

    /// `(a1, a2)` of `(X^2 + bX + q)(X^2 + b' X + q)` where `b'` is the conjugate.
    pub fn weil_pair(&self, q: i64) -> (i64, i64) {
        (self.trace(), self.norm() + 2 * q)
    }
}

impl fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/2", self.u, self.v, self.d)
    }
}

fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Finds `b` in the ring of integers of `Q(sqrt d)` with
/// `P(X) = (X^2 + bX + q)(X^2 + b' X + q)`, taking `v >= 0`.
pub fn rm_factor(w: &WeilQuartic, d: i64) -> Result<Option<QuadFieldElem>, WeilError> {
    if d <= 1 || !is_squarefree(d) {
        return Err(WeilError::NotSquarefree(d));
    }
    let delta = discriminant(w) as i128;
    if delta % d as i128 != 0 {
        return Ok(None);
    }
    let Some(v) = exact_sqrt(delta / d as i128) else {
        return Ok(None);
    };
    Ok(QuadFieldElem::new(d, w.a1, v as i64).ok())
}
