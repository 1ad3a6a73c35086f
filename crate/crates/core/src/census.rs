//! Point counts of genus-2 curves `y^2 = f(x)` over F_p and F_{p^2}, the
//! Frobenius quartics they determine, and supersingular-prime censuses.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{is_prime, PrimeModulus};
use crate::weil::{classify, discriminant, SurfaceClass, WeilError, WeilQuartic};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("f must have degree 5 or 6, got degree {0}")]
    BadDegree(usize),
    #[error("f is not squarefree (discriminant 0)")]
    NotSquarefree,
    #[error("could not parse curve: {0}")]
    Parse(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("extension degree must be 1 or 2, got {0}")]
    BadExtensionDegree(u32),
    #[error("p = {0} is too large for point counting")]
    PrimeTooLarge(u64),
    #[error("point counts (n1, n2) = ({n1}, {n2}) at p = {p} do not give a Weil quartic")]
    InconsistentCounts { p: u64, n1: u64, n2: u64 },
    #[error("|g({p})| = {value} exceeds 6p")]
    RuleOutOfRange { p: u64, value: i64 },
    #[error("no table entry for p = {0}")]
    MissingTableEntry(u64),
    #[error("bad CSV record: {0}")]
    Csv(String),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<csv::Error> for CensusError {
    fn from(e: csv::Error) -> Self {
        CensusError::Csv(e.to_string())
    }
}

/// Largest prime accepted by the counting kernels; keeps products in u64.
pub const MAX_COUNT_PRIME: u64 = u32::MAX as u64;

/// `y^2 = f(x)` over Q with `f` squarefree of degree 5 or 6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    /// Highest degree first.
    coeffs: Vec<i64>,
    disc: BigInt,
}

impl HyperellipticCurve {
    /// Coefficients highest degree first; leading zeros are dropped.
    pub fn new(coeffs: &[i64]) -> Result<Self, CensusError> {
        let start = coeffs.iter().position(|&c| c != 0).unwrap_or(coeffs.len());
        let coeffs = coeffs[start..].to_vec();
        let deg = coeffs.len().saturating_sub(1);
        if deg != 5 && deg != 6 {
            return Err(CensusError::BadDegree(deg));
        }
        let disc = poly_discriminant(&coeffs);
        if disc == BigInt::from(0) {
            return Err(CensusError::NotSquarefree);
        }
        Ok(HyperellipticCurve { coeffs, disc })
    }

    /// The monic quintic `x^5 + c4 x^4 + ... + c0`.
    pub fn monic_quintic(lower: [i64; 5]) -> Result<Self, CensusError> {
        let mut c = vec![1];
        c.extend_from_slice(&lower);
        Self::new(&c)
    }

    /// Reads the line `f: c5,c4,c3,c2,c1,c0` (or seven coefficients for a
    /// sextic). Blank lines and lines starting with `#` are ignored.
    pub fn from_config(text: &str) -> Result<Self, CensusError> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("f:") {
                return Self::new(&parse_coeff_list(rest)?);
            }
        }
        Err(CensusError::Parse("no line of the form `f: c5,c4,c3,c2,c1,c0`".into()))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// `p` odd, not dividing the discriminant or the leading coefficient.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        p % 2 == 1 && self.leading() % p as i64 != 0 && &self.disc % BigInt::from(p) != BigInt::from(0)
    }

    fn reduced(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect()
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "f: {}", parts.join(","))
    }
}

impl FromStr for HyperellipticCurve {
    type Err = CensusError;
    fn from_str(s: &str) -> Result<Self, CensusError> {
        Self::from_config(s)
    }
}

pub fn parse_coeff_list(s: &str) -> Result<Vec<i64>, CensusError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| CensusError::Parse(format!("`{}`: {e}", t.trim()))))
        .collect()
}

/// `(-1)^(n(n-1)/2) Res(f, f') / lead(f)`, coefficients highest first.
pub fn poly_discriminant(coeffs: &[i64]) -> BigInt {
    let n = coeffs.len() - 1;
    let f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let df: Vec<BigInt> = coeffs[..n].iter().enumerate().map(|(i, &c)| BigInt::from(c) * BigInt::from(n - i)).collect();
    let size = 2 * n - 1;
    let mut m = vec![vec![BigInt::from(0); size]; size];
    for r in 0..n - 1 {
        for (j, c) in f.iter().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..n {
        for (j, c) in df.iter().enumerate() {
            m[n - 1 + r][r + j] = c.clone();
        }
    }
    let res = bareiss_det(m);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    res * BigInt::from(sign) / &f[0]
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let zero = BigInt::from(0);
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k] == zero {
            match (k + 1..n).find(|&r| m[r][k] != zero) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn residue_table(p: u64) -> Vec<bool> {
    let mut sq = vec![false; p as usize];
    for x in 1..=p / 2 {
        sq[(x * x % p) as usize] = true;
    }
    sq
}

#[inline]
fn chi(v: u64, sq: &[bool]) -> i64 {
    if v == 0 {
        0
    } else if sq[v as usize] {
        1
    } else {
        -1
    }
}

fn horner(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Taylor coefficients of `f(a + y)`, lowest degree first.
fn taylor_at(f: &[u64], a: u64, p: u64) -> Vec<u64> {
    let mut work = f.to_vec();
    let n = work.len();
    let mut out = Vec::with_capacity(n);
    for len in (1..=n).rev() {
        for i in 1..len {
            work[i] = (work[i] + work[i - 1] * a) % p;
        }
        out.push(work[len - 1]);
    }
    out
}

fn check_count_args(c: &HyperellipticCurve, p: u64) -> Result<(), CensusError> {
    if p < 3 || !is_prime(p) {
        return Err(CensusError::NotOddPrime(p));
    }
    if p > MAX_COUNT_PRIME {
        return Err(CensusError::PrimeTooLarge(p));
    }
    if !c.has_good_reduction(p) {
        return Err(CensusError::BadReduction(p));
    }
    Ok(())
}

fn points_at_infinity(c: &HyperellipticCurve, p: u64, k: u32, sq: &[bool]) -> u64 {
    if c.degree() == 5 {
        1
    } else if k == 2 || sq[c.leading().rem_euclid(p as i64) as usize] {
        2
    } else {
        0
    }
}

fn count_fp(f: &[u64], p: u64, sq: &[bool]) -> i64 {
    (0..p).map(|x| chi(horner(f, x, p), sq)).sum()
}

/// Character sum over F_{p^2} = F_p(sqrt r). Elements off F_p come in
/// conjugate pairs with equal norms, so each pair is visited once.
fn count_fp2(f: &[u64], p: u64, sq: &[bool]) -> i64 {
    let md = PrimeModulus::new(p).expect("odd prime");
    let r = md.smallest_nonresidue();
    let half = (p - 1) / 2;
    let bsq: Vec<u64> = (1..=half).map(|b| b * b % p).collect();
    let rbsq: Vec<u64> = bsq.iter().map(|&b| b * r % p).collect();
    let on_base: i64 = (0..p).filter(|&x| horner(f, x, p) != 0).count() as i64;
    let off_base: i64 = (0..p)
        .map(|a| {
            let t = taylor_at(f, a, p);
            let coef = |j: usize| t.get(j).copied().unwrap_or(0);
            let mut rp = 1;
            let mut even = [0u64; 4];
            let mut odd = [0u64; 3];
            for m in 0..4 {
                even[m] = coef(2 * m) * rp % p;
                if m < 3 {
                    odd[m] = coef(2 * m + 1) * rp % p;
                }
                rp = rp * r % p;
            }
            let mut s = 0i64;
            for (bb, rbb) in bsq.iter().zip(&rbsq) {
                let b2 = *bb;
                let re = (((even[3] * b2 + even[2]) % p * b2 + even[1]) % p * b2 + even[0]) % p;
                let j = ((odd[2] * b2 + odd[1]) % p * b2 + odd[0]) % p;
                let n = (re * re % p + p - rbb * (j * j % p) % p) % p;
                s += chi(n, sq);
            }
            s
        })
        .sum();
    on_base + 2 * off_base
}

/// `#C(F_{p^k})` for `k` in {1, 2}, counting the points at infinity of the
/// smooth model.
pub fn reduce_and_count(c: &HyperellipticCurve, p: u64, k: u32) -> Result<u64, CensusError> {
    if k != 1 && k != 2 {
        return Err(CensusError::BadExtensionDegree(k));
    }
    check_count_args(c, p)?;
    let f = c.reduced(p);
    let sq = residue_table(p);
    let inf = points_at_infinity(c, p, k, &sq);
    let total = if k == 1 {
        p as i64 + count_fp(&f, p, &sq)
    } else {
        (p * p) as i64 + count_fp2(&f, p, &sq)
    };
    Ok(total as u64 + inf)
}

/// Both counts from one reduction.
pub fn point_counts(c: &HyperellipticCurve, p: u64) -> Result<(u64, u64), CensusError> {
    check_count_args(c, p)?;
    let f = c.reduced(p);
    let sq = residue_table(p);
    let n1 = (p as i64 + count_fp(&f, p, &sq)) as u64 + points_at_infinity(c, p, 1, &sq);
    let n2 = ((p * p) as i64 + count_fp2(&f, p, &sq)) as u64 + points_at_infinity(c, p, 2, &sq);
    Ok((n1, n2))
}

/// `(a1, a2)` from `(N1, N2)`, if `a2` is integral.
pub fn coefficients_from_counts(p: u64, n1: u64, n2: u64) -> Option<(i64, i64)> {
    let (p, n1, n2) = (p as i64, n1 as i64, n2 as i64);
    let a1 = n1 - p - 1;
    let twice = a1 * a1 + n2 - p * p - 1;
    (twice % 2 == 0).then_some((a1, twice / 2))
}

fn quartic_from_counts(p: u64, n1: u64, n2: u64) -> Result<WeilQuartic, CensusError> {
    let bad = CensusError::InconsistentCounts { p, n1, n2 };
    let (a1, a2) = coefficients_from_counts(p, n1, n2).ok_or(bad)?;
    WeilQuartic::prime(a1, a2, p as i64).map_err(|_| CensusError::InconsistentCounts { p, n1, n2 })
}

pub fn frobenius_quartic(c: &HyperellipticCurve, p: u64) -> Result<WeilQuartic, CensusError> {
    let (n1, n2) = point_counts(c, p)?;
    quartic_from_counts(p, n1, n2)
}

/// One good prime of a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub p: u64,
    pub n1: u64,
    pub n2: u64,
    pub a1: i64,
    pub a2: i64,
    pub delta: i64,
    pub cls: SurfaceClass,
}

impl CensusRecord {
    /// Record for `p >= 7` from its point counts.
    pub fn from_counts(p: u64, n1: u64, n2: u64) -> Result<Self, CensusError> {
        let w = quartic_from_counts(p, n1, n2)?;
        Ok(CensusRecord { p, n1, n2, a1: w.a1(), a2: w.a2(), delta: discriminant(&w), cls: classify(&w)? })
    }

    pub fn quartic(&self) -> WeilQuartic {
        WeilQuartic::prime(self.a1, self.a2, self.p as i64).expect("validated at construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusOptions {
    /// Scan primes concurrently; output order is unaffected.
    pub parallel: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { parallel: true }
    }
}

/// Primes `lo <= p <= x`.
pub fn primes_in(lo: u64, x: f64) -> Vec<u64> {
    if !(x >= lo as f64) {
        return Vec::new();
    }
    let hi = x.floor() as u64;
    (lo..=hi).filter(|&p| is_prime(p)).collect()
}

fn good_primes(c: &HyperellipticCurve, x: f64) -> Vec<u64> {
    primes_in(7, x)
        .into_iter()
        .filter(|&p| {
            let good = c.has_good_reduction(p);
            if !good {
                log::info!("skipping p = {p}: bad reduction");
            }
            good
        })
        .collect()
}

fn map_primes<T: Send>(primes: &[u64], parallel: bool, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    if parallel {
        primes.par_iter().map(|&p| f(p)).collect()
    } else {
        primes.iter().map(|&p| f(p)).collect()
    }
}

/// One record per good prime `7 <= p <= x`, ascending in `p`.
pub fn census_scan(c: &HyperellipticCurve, x: f64, opts: &CensusOptions) -> Result<Vec<CensusRecord>, CensusError> {
    let primes = good_primes(c, x);
    map_primes(&primes, opts.parallel, |p| {
        let (n1, n2) = point_counts(c, p)?;
        CensusRecord::from_counts(p, n1, n2)
    })
    .into_iter()
    .collect()
}

/// `N1` only, for p-rank screening at larger `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub p: u64,
    pub n1: u64,
    pub a1: i64,
    /// `p | a1`, necessary for p-rank 0.
    pub ss_candidate: bool,
}

pub fn trace_scan(c: &HyperellipticCurve, x: f64, opts: &CensusOptions) -> Result<Vec<TraceRecord>, CensusError> {
    let primes = good_primes(c, x);
    map_primes(&primes, opts.parallel, |p| {
        let n1 = reduce_and_count(c, p, 1)?;
        let a1 = n1 as i64 - p as i64 - 1;
        Ok(TraceRecord { p, n1, a1, ss_candidate: a1 % p as i64 == 0 })
    })
    .into_iter()
    .collect()
}

/// Target value `g(p)` for the middle coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientRule {
    Constant(i64),
    /// `2p + m0`.
    AffineInP(i64),
    ExternalTable(BTreeMap<u64, i64>),
}

impl CoefficientRule {
    /// `g(p)`, rejecting values with `|g(p)| > 6p`.
    pub fn eval(&self, p: u64) -> Result<i64, CensusError> {
        let v = match self {
            CoefficientRule::Constant(t) => *t,
            CoefficientRule::AffineInP(m0) => 2 * p as i64 + m0,
            CoefficientRule::ExternalTable(t) => *t.get(&p).ok_or(CensusError::MissingTableEntry(p))?,
        };
        if v.unsigned_abs() > 6 * p {
            return Err(CensusError::RuleOutOfRange { p, value: v });
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Selector {
    SsTotal,
    SsSplit,
    /// `delta = 0` and `a2 = g(p)`.
    SplitWithRule(CoefficientRule),
    /// `delta = 0` and `lo <= a2 <= hi`.
    SplitWithInterval { lo: f64, hi: f64 },
}

/// Number of records matching the selector. A rule is evaluated at every
/// record with `delta = 0`.
pub fn counting_functions(records: &[CensusRecord], sel: &Selector) -> Result<u64, CensusError> {
    let mut n = 0;
    for r in records {
        let hit = match sel {
            Selector::SsTotal => r.cls.is_supersingular(),
            Selector::SsSplit => r.cls == SurfaceClass::SplitSS,
            Selector::SplitWithRule(rule) => r.delta == 0 && rule.eval(r.p)? == r.a2,
            Selector::SplitWithInterval { lo, hi } => r.delta == 0 && *lo <= r.a2 as f64 && r.a2 as f64 <= *hi,
        };
        n += hit as u64;
    }
    Ok(n)
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    p: u64,
    n1: u64,
    n2: u64,
    a1: i64,
    a2: i64,
    delta: i64,
    class: String,
}

pub fn write_csv<W: io::Write>(records: &[CensusRecord], out: W) -> Result<(), CensusError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow { p: r.p, n1: r.n1, n2: r.n2, a1: r.a1, a2: r.a2, delta: r.delta, class: r.cls.name().into() })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records back, rechecking every row against its point counts.
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<CensusRecord>, CensusError> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rd.deserialize() {
        let row: CsvRow = row?;
        let rec = CensusRecord::from_counts(row.p, row.n1, row.n2)?;
        let cls: SurfaceClass = row.class.parse().map_err(|_| CensusError::Csv(format!("unknown class `{}`", row.class)))?;
        if (rec.a1, rec.a2, rec.delta, rec.cls) != (row.a1, row.a2, row.delta, cls) {
            return Err(CensusError::Csv(format!("row for p = {} is inconsistent with its point counts", row.p)));
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::QuadExtension;
    use crate::weil::{classify_supersingular, p_rank};
    use proptest::prelude::*;

    fn quintic(lower: [i64; 5]) -> HyperellipticCurve {
        HyperellipticCurve::monic_quintic(lower).unwrap()
    }

    /// Point count by walking every element of F_{p^k}, with the character
    /// taken by exponentiation.
    fn brute_count(c: &HyperellipticCurve, p: u64, k: u32) -> u64 {
        let md = PrimeModulus::new(p).unwrap();
        let field = QuadExtension::new(md);
        let coeffs: Vec<_> = c.coeffs().iter().map(|&a| field.elem(a, 0)).collect();
        let eval = |x| coeffs.iter().fold(field.zero(), |acc, &a| acc * x + a);
        let affine: i64 = if k == 1 {
            (0..p)
                .map(|x| {
                    let v = md.reduce(eval(field.elem(x as i64, 0)).a() as i64);
                    1 + if v == 0 { 0 } else if md.pow(v, (p - 1) / 2) == 1 { 1 } else { -1 }
                })
                .sum()
        } else {
            field.elements().map(|x| 1 + eval(x).quadratic_character() as i64).sum()
        };
        let lead = md.reduce(c.leading());
        let inf = match (c.degree(), k) {
            (5, _) => 1,
            (_, 2) => 2,
            _ if md.pow(lead, (p - 1) / 2) == 1 => 2,
            _ => 0,
        };
        affine as u64 + inf
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(quintic([0, 0, 0, -1, 1]).discriminant(), &BigInt::from(2869));
        assert_eq!(quintic([0, 0, 0, 0, 1]).discriminant(), &BigInt::from(3125));
        // x^5 + a x + b: 5^5 b^4 + 4^4 a^5
        assert_eq!(quintic([0, 0, 0, 2, 3]).discriminant(), &BigInt::from(3125 * 81 + 256 * 32));
        // (x^2 - 2)(x^3 - 3): 8 * (-243) * Res^2 with Res = 9 - 8 = 1
        let c = HyperellipticCurve::new(&[1, 0, -2, -3, 0, 6]).unwrap();
        assert_eq!(c.discriminant(), &BigInt::from(-1944));
        assert!(matches!(HyperellipticCurve::new(&[1, 0, 0, 0, 0, 0]), Err(CensusError::NotSquarefree)));
        assert!(matches!(HyperellipticCurve::new(&[1, 0, 0, 1]), Err(CensusError::BadDegree(3))));
    }

    #[test]
    fn sextic_discriminant_matches_root_products() {
        // prod (x - i) for i = 1..6: disc = prod_{i<j} (j - i)^2
        let mut f = vec![1i64];
        for i in 1..=6 {
            let mut g = vec![0; f.len() + 1];
            for (k, &c) in f.iter().enumerate() {
                g[k] += c;
                g[k + 1] -= i * c;
            }
            f = g;
        }
        let mut expected = BigInt::from(1);
        for i in 1..=6i64 {
            for j in i + 1..=6 {
                expected *= BigInt::from((j - i) * (j - i));
            }
        }
        assert_eq!(HyperellipticCurve::new(&f).unwrap().discriminant(), &expected);
    }

    #[test]
    fn config_parsing() {
        let c: HyperellipticCurve = "# fixture\n\nf: 1,0,0,0,-1,1\n".parse().unwrap();
        assert_eq!(c.coeffs(), &[1, 0, 0, 0, -1, 1]);
        assert_eq!(c.to_string(), "f: 1,0,0,0,-1,1");
        assert!("g: 1,2".parse::<HyperellipticCurve>().is_err());
        assert!("f: 1,x,0,0,0,1".parse::<HyperellipticCurve>().is_err());
    }

    #[test]
    fn count_examples() {
        let c = quintic([0, 0, 0, -1, 1]);
        assert_eq!(reduce_and_count(&c, 7, 1).unwrap(), 7);
        assert_eq!(reduce_and_count(&c, 3, 1).unwrap(), 7);
        assert_eq!(reduce_and_count(&c, 3, 2).unwrap(), 15);
        assert!(matches!(reduce_and_count(&c, 19, 1), Err(CensusError::BadReduction(19))));
        assert!(matches!(reduce_and_count(&c, 151, 2), Err(CensusError::BadReduction(151))));
        assert!(matches!(reduce_and_count(&c, 2, 1), Err(CensusError::NotOddPrime(2))));
        assert!(matches!(reduce_and_count(&c, 9, 1), Err(CensusError::NotOddPrime(9))));
        assert!(matches!(reduce_and_count(&c, 7, 3), Err(CensusError::BadExtensionDegree(3))));
    }

    #[test]
    fn quartic_examples() {
        let w = frobenius_quartic(&quintic([0, 0, 0, -1, 1]), 3).unwrap();
        assert_eq!((w.a1(), w.a2()), (3, 7));
        let w = frobenius_quartic(&quintic([0, 0, 0, 0, 1]), 19).unwrap();
        assert_eq!(w.a1() % 19, 0);
        assert_eq!(w.a2() % 19, 0);
        assert_eq!(p_rank(&w), 0);
    }

    #[test]
    fn fast_counts_match_brute_force() {
        let curves = [
            quintic([0, 0, 0, -1, 1]),
            quintic([0, 0, 0, 0, 1]),
            quintic([1, -2, 3, 5, -7]),
            HyperellipticCurve::new(&[3, 0, 1, 0, 0, 2, 1]).unwrap(),
            HyperellipticCurve::new(&[2, 1, 0, -1, 4, 0, 5]).unwrap(),
            HyperellipticCurve::new(&[-1, 2, 0, 0, 1, 1]).unwrap(),
        ];
        for c in &curves {
            for p in (3..60u64).filter(|&p| is_prime(p) && c.has_good_reduction(p)) {
                for k in [1, 2] {
                    assert_eq!(reduce_and_count(c, p, k).unwrap(), brute_count(c, p, k), "{c} p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn sextic_with_nonsquare_leading_coefficient() {
        // 3 is not a square mod 7: no rational points at infinity
        let c = HyperellipticCurve::new(&[3, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(reduce_and_count(&c, 7, 1).unwrap(), brute_count(&c, 7, 1));
        assert_eq!(points_at_infinity(&c, 7, 1, &residue_table(7)), 0);
        assert_eq!(points_at_infinity(&c, 7, 2, &residue_table(7)), 2);
    }

    #[test]
    fn scan_examples() {
        let c = quintic([0, 0, 0, -1, 1]);
        let opts = CensusOptions::default();
        assert!(census_scan(&c, 6.9, &opts).unwrap().is_empty());
        let recs = census_scan(&c, 50.0, &opts).unwrap();
        let ps: Vec<u64> = recs.iter().map(|r| r.p).collect();
        assert_eq!(ps, vec![7, 11, 13, 17, 23, 29, 31, 37, 41, 43, 47]);
        assert_eq!(recs[0].n1, 7);
    }

    #[test]
    fn cm_curve_is_supersingular_off_one_mod_five() {
        let c = quintic([0, 0, 0, 0, 1]);
        let recs = census_scan(&c, 100.0, &CensusOptions::default()).unwrap();
        for r in &recs {
            assert_eq!(r.cls.is_supersingular(), r.p % 5 != 1, "p = {}", r.p);
            if r.p % 5 == 1 {
                assert_eq!(r.cls, SurfaceClass::Ordinary);
            }
        }
        let p_rank_zero = recs.iter().filter(|r| p_rank(&r.quartic()) == 0).count() as u64;
        assert_eq!(counting_functions(&recs, &Selector::SsTotal).unwrap(), p_rank_zero);
        let in_templates = recs.iter().filter(|r| classify_supersingular(&r.quartic()).unwrap().is_supersingular()).count();
        assert_eq!(counting_functions(&recs, &Selector::SsTotal).unwrap(), in_templates as u64);
    }

    #[test]
    fn zeta_identities_and_coherence() {
        for c in [quintic([0, 0, 0, -1, 1]), quintic([0, 0, 0, 0, 1]), quintic([0, 1, 0, 0, 1])] {
            for r in census_scan(&c, 300.0, &CensusOptions::default()).unwrap() {
                let p = r.p as i64;
                assert_eq!(r.n1 as i64, p + 1 + r.a1);
                assert_eq!(r.n2 as i64, p * p + 1 - (r.a1 * r.a1 - 2 * r.a2));
                let pr0 = p_rank(&r.quartic()) == 0;
                if p >= 17 {
                    assert_eq!(r.cls.is_supersingular(), pr0);
                } else if r.cls.is_supersingular() {
                    assert!(pr0);
                }
                assert_eq!(r.cls == SurfaceClass::SplitSS, r.delta == 0 && r.a1 == 0);
            }
        }
    }

    #[test]
    fn scan_is_deterministic() {
        let c = quintic([1, -2, 3, 5, -7]);
        let a = census_scan(&c, 400.0, &CensusOptions { parallel: true }).unwrap();
        let b = census_scan(&c, 400.0, &CensusOptions { parallel: false }).unwrap();
        let (mut wa, mut wb) = (Vec::new(), Vec::new());
        write_csv(&a, &mut wa).unwrap();
        write_csv(&b, &mut wb).unwrap();
        assert_eq!(wa, wb);
    }

    #[test]
    fn trace_scan_agrees() {
        let c = quintic([0, 0, 0, 0, 1]);
        let full = census_scan(&c, 200.0, &CensusOptions::default()).unwrap();
        let tr = trace_scan(&c, 200.0, &CensusOptions::default()).unwrap();
        assert_eq!(full.len(), tr.len());
        for (f, t) in full.iter().zip(&tr) {
            assert_eq!((f.p, f.n1, f.a1), (t.p, t.n1, t.a1));
            if f.cls.is_supersingular() {
                assert!(t.ss_candidate);
            }
        }
    }

    #[test]
    fn csv_roundtrip() {
        let recs = census_scan(&quintic([0, 0, 0, 0, 1]), 60.0, &CensusOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("p,n1,n2,a1,a2,delta,class\n"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), recs);
        let tampered = text.replacen("ordinary", "ss_split", 1);
        assert!(read_csv(tampered.as_bytes()).is_err());
    }

    #[test]
    fn selectors() {
        let recs = census_scan(&quintic([0, 0, 0, 0, 1]), 300.0, &CensusOptions::default()).unwrap();
        let split = counting_functions(&recs, &Selector::SsSplit).unwrap();
        assert_eq!(counting_functions(&recs, &Selector::SplitWithRule(CoefficientRule::AffineInP(0))).unwrap(), split);
        let x = 300.0;
        let all_zero = recs.iter().filter(|r| r.delta == 0).count() as u64;
        assert_eq!(counting_functions(&recs, &Selector::SplitWithInterval { lo: -6.0 * x, hi: 6.0 * x }).unwrap(), all_zero);
        assert!(all_zero > 0);
        assert!(matches!(
            counting_functions(&recs, &Selector::SplitWithRule(CoefficientRule::Constant(1 << 40))),
            Err(CensusError::RuleOutOfRange { .. })
        ));
        assert!(CoefficientRule::Constant(43).eval(7).is_err());
        assert_eq!(CoefficientRule::Constant(42).eval(7).unwrap(), 42);
        let table = CoefficientRule::ExternalTable(BTreeMap::from([(7, 14)]));
        assert_eq!(table.eval(7).unwrap(), 14);
        assert!(matches!(table.eval(11), Err(CensusError::MissingTableEntry(11))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_quintics_count_correctly(lower in proptest::array::uniform5(-9i64..10), pi in 0usize..8) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23][pi];
            if let Ok(c) = HyperellipticCurve::monic_quintic(lower) {
                if c.has_good_reduction(p) {
                    prop_assert_eq!(reduce_and_count(&c, p, 2).unwrap(), brute_count(&c, p, 2));
                    let w = frobenius_quartic(&c, p).unwrap();
                    let (n1, n2) = point_counts(&c, p).unwrap();
                    prop_assert_eq!(n2 as i64, (p * p) as i64 + 1 - (w.a1() * w.a1() - 2 * w.a2()));
                    prop_assert_eq!(n1, brute_count(&c, p, 1));
                }
            }
        }
    }
}
