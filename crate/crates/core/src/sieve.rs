//! Quadratic-residue sieve over a prime set, effective Chebotarev budgets,
//! parameter schedules and the upper-bound curves.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{is_prime, legendre, PrimeModulus};
use crate::splitting::{admissible, AdmissibilityContext, CaseIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SieveError {
    #[error("x = {0} must exceed e")]
    SmallX(f64),
    #[error("need x > e^e so that log log x > 1, got x = {0}")]
    BoundDomain(f64),
    #[error("t must be at least 1")]
    ZeroT,
    #[error("t = {t} exceeds ceil(sqrt(log x)) = {max}")]
    TooManyPrimes { t: usize, max: usize },
    #[error("expected {t} primes, got {got}")]
    PrimeCountMismatch { t: usize, got: usize },
    #[error("sieve primes must be odd primes in strictly increasing order")]
    BadPrimeList,
    #[error("ell = {ell} exceeds {bound:.3} = C log x / log log x")]
    EllTooLarge { ell: u64, bound: f64 },
    #[error("ell = {ell} is not admissible for case {i}")]
    NotAdmissible { ell: u64, i: u8 },
    #[error("product of sieve primes {product} is not below x = {x}")]
    ProductTooLarge { product: u128, x: f64 },
    #[error("{0} is not a prime <= x")]
    BadMember(u64),
    #[error("invalid field data: {0}")]
    BadField(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

/// Default `C` in the bound `ell <= C log x / log log x`.
pub const DEFAULT_ELL_CONSTANT: f64 = 16.0;

/// Sieve data: the bound `x`, the sieve primes and the template they serve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub x: f64,
    pub t: usize,
    pub primes: Vec<u64>,
    pub case: CaseIndex,
    #[serde(default = "default_ell_constant", skip_serializing_if = "is_default_constant")]
    pub ell_constant: f64,
}

fn default_ell_constant() -> f64 {
    DEFAULT_ELL_CONSTANT
}

fn is_default_constant(c: &f64) -> bool {
    *c == DEFAULT_ELL_CONSTANT
}

impl SieveConfig {
    pub fn new(x: f64, primes: Vec<u64>, case: CaseIndex) -> Result<Self, SieveError> {
        let cfg = SieveConfig { x, t: primes.len(), primes, case, ell_constant: DEFAULT_ELL_CONSTANT };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn product(&self) -> u128 {
        self.primes.iter().map(|&l| l as u128).product()
    }

    pub fn validate(&self) -> Result<(), SieveError> {
        let x = self.x;
        if !(x > E) {
            return Err(SieveError::SmallX(x));
        }
        if self.t == 0 {
            return Err(SieveError::ZeroT);
        }
        let max_t = x.ln().sqrt().ceil() as usize;
        if self.t > max_t {
            return Err(SieveError::TooManyPrimes { t: self.t, max: max_t });
        }
        if self.primes.len() != self.t {
            return Err(SieveError::PrimeCountMismatch { t: self.t, got: self.primes.len() });
        }
        let ordered = self.primes.windows(2).all(|w| w[0] < w[1]);
        if !ordered || self.primes.iter().any(|&l| l < 3 || !is_prime(l)) {
            return Err(SieveError::BadPrimeList);
        }
        if !(self.ell_constant > 0.0) {
            return Err(SieveError::BadParameter("ell constant must be positive".into()));
        }
        // below e^e the log log x denominator is not a meaningful cap
        if x > E.powf(E) {
            let bound = self.ell_constant * x.ln() / x.ln().ln();
            if let Some(&ell) = self.primes.iter().find(|&&l| l as f64 > bound) {
                return Err(SieveError::EllTooLarge { ell, bound });
            }
        }
        if let Some(&ell) = self.primes.iter().find(|&&l| !self.case.plain_admissible(l)) {
            return Err(SieveError::NotAdmissible { ell, i: self.case.get() });
        }
        let product = self.product();
        if product as f64 >= x {
            return Err(SieveError::ProductTooLarge { product, x });
        }
        Ok(())
    }
}

/// Residues `n mod ell` with `(n / ell) = -1`.
pub fn nonresidue_classes(ell: PrimeModulus) -> Vec<u64> {
    (0..ell.ell()).filter(|&n| legendre(n as i64, ell) == -1).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllCount {
    pub ell: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub members: u64,
    /// `#{p : (p / ell) != -1}` for each sieve prime.
    pub per_ell: Vec<EllCount>,
    /// Members outside every per-ell set.
    pub leftover: u64,
    /// Members in at least one per-ell set.
    pub union: u64,
    /// `members = union + leftover`.
    pub partition_exact: bool,
    /// `members <= sum of per-ell counts + leftover`.
    pub inequality_holds: bool,
    /// `x / (2^t log(x / P_t))`.
    pub bound_term: f64,
    pub leftover_ratio: f64,
    pub leftover_within_bound: bool,
}

pub fn bound_term(x: f64, t: usize, product: u128) -> f64 {
    x / (2f64.powi(t as i32) * (x / product as f64).ln())
}

/// Splits the member primes by the residue conditions of the sieve primes.
pub fn sieve_report(members: &[u64], cfg: &SieveConfig) -> Result<SieveReport, SieveError> {
    cfg.validate()?;
    if let Some(&p) = members.iter().find(|&&p| !is_prime(p) || p as f64 > cfg.x) {
        return Err(SieveError::BadMember(p));
    }
    let moduli: Vec<PrimeModulus> = cfg.primes.iter().map(|&l| PrimeModulus::new(l).expect("validated")).collect();
    let mut per_ell: Vec<EllCount> = cfg.primes.iter().map(|&ell| EllCount { ell, count: 0 }).collect();
    let (mut leftover, mut union) = (0u64, 0u64);
    for &p in members {
        let mut hit = false;
        for (slot, &md) in per_ell.iter_mut().zip(&moduli) {
            if legendre(p as i64, md) != -1 {
                slot.count += 1;
                hit = true;
            }
        }
        if hit {
            union += 1;
        } else {
            leftover += 1;
        }
    }
    let n = members.len() as u64;
    let sum: u64 = per_ell.iter().map(|e| e.count).sum();
    let bt = bound_term(cfg.x, cfg.t, cfg.product());
    Ok(SieveReport {
        members: n,
        per_ell,
        leftover,
        union,
        partition_exact: n == union + leftover,
        inequality_holds: n <= sum + leftover,
        bound_term: bt,
        leftover_ratio: leftover as f64 / bt,
        leftover_within_bound: leftover as f64 <= bt,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    Generic,
    RmOrQm,
}

fn check_bound_domain(x: f64) -> Result<(), SieveError> {
    if !(x > E.powf(E)) {
        return Err(SieveError::BoundDomain(x));
    }
    Ok(())
}

/// `x (log log x)^e / (log x)^e` with `e = 3/2` (generic) or `2`.
pub fn theorem_bound(case: BoundCase, x: f64) -> Result<f64, SieveError> {
    check_bound_domain(x)?;
    let (l, ll) = (x.ln(), x.ln().ln());
    Ok(match case {
        BoundCase::Generic => x * (ll / l).powf(1.5),
        BoundCase::RmOrQm => x * (ll / l).powi(2),
    })
}

/// Degrees, discriminant and ramification of a tower `L / K / Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldBudget {
    pub degree_lk: u64,
    pub degree_lq: u64,
    pub degree_kq: u64,
    pub log_dk: f64,
    pub ramified: Vec<u64>,
    pub rad_rel_disc: u64,
}

impl FieldBudget {
    pub fn new(
        degree_lk: u64,
        degree_lq: u64,
        degree_kq: u64,
        log_dk: f64,
        ramified: Vec<u64>,
        rad_rel_disc: u64,
    ) -> Result<Self, SieveError> {
        let fb = FieldBudget { degree_lk, degree_lq, degree_kq, log_dk, ramified, rad_rel_disc };
        fb.validate()?;
        Ok(fb)
    }

    pub fn validate(&self) -> Result<(), SieveError> {
        let bad = |m: &str| Err(SieveError::BadField(m.into()));
        if self.degree_lk == 0 || self.degree_lq == 0 || self.degree_kq == 0 {
            return bad("degrees must be at least 1");
        }
        if self.degree_lq != self.degree_lk * self.degree_kq {
            return bad("[L:Q] must equal [L:K][K:Q]");
        }
        if !(self.log_dk >= 0.0) {
            return bad("log d_K must be a non-negative number");
        }
        if !self.ramified.windows(2).all(|w| w[0] < w[1]) {
            return bad("ramified primes must be sorted and distinct");
        }
        if self.ramified.iter().any(|&p| !is_prime(p)) {
            return bad("ramified list must contain primes only");
        }
        if self.rad_rel_disc == 0 {
            return bad("radical of the relative discriminant must be positive");
        }
        Ok(())
    }

    /// `[L:K] d_K^(1/n_K) prod p`.
    pub fn m_value(&self) -> f64 {
        let rad: f64 = self.ramified.iter().map(|&p| p as f64).product();
        self.degree_lk as f64 * (self.log_dk / self.degree_kq as f64).exp() * rad
    }

    /// Upper bound for `log d_L` from the relative discriminant.
    pub fn hensel_bound(&self) -> f64 {
        self.degree_lk as f64 * self.log_dk
            + (self.degree_lq - self.degree_kq) as f64 * (self.rad_rel_disc as f64).ln()
            + self.degree_lq as f64 * (self.degree_lk as f64).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebotarevBudget {
    pub m: f64,
    pub hensel_ub: f64,
    pub upper: f64,
    pub applicable: bool,
}

pub const DEFAULT_KAPPA: f64 = 1.0;

pub fn chebotarev_budget(fb: &FieldBudget, card_c: u64, card_g: u64, x: f64) -> Result<ChebotarevBudget, SieveError> {
    chebotarev_budget_with(fb, card_c, card_g, x, DEFAULT_KAPPA)
}

/// `upper = (|C| / |G|) Li(x)`, applicable when `log x >= kappa n_K log(M x)`.
pub fn chebotarev_budget_with(
    fb: &FieldBudget,
    card_c: u64,
    card_g: u64,
    x: f64,
    kappa: f64,
) -> Result<ChebotarevBudget, SieveError> {
    fb.validate()?;
    if card_c == 0 || card_c > card_g {
        return Err(SieveError::BadParameter(format!("need 1 <= |C| <= |G|, got {card_c}, {card_g}")));
    }
    if !(x >= 2.0) {
        return Err(SieveError::BadParameter(format!("need x >= 2, got {x}")));
    }
    if !(kappa > 0.0) {
        return Err(SieveError::BadParameter("kappa must be positive".into()));
    }
    let m = fb.m_value();
    Ok(ChebotarevBudget {
        m,
        hensel_ub: fb.hensel_bound(),
        upper: card_c as f64 / card_g as f64 * offset_li(x),
        applicable: x.ln() >= kappa * fb.degree_kq as f64 * (m * x).ln(),
    })
}

/// Integral of `1 / log t` over `[2, x]`.
pub fn offset_li(x: f64) -> f64 {
    let f = |t: f64| 1.0 / t.ln();
    if x <= 2.0 {
        return 0.0;
    }
    // dyadic pieces keep the subdivision local where the integrand varies
    let mut pieces = Vec::new();
    let mut a = 2.0;
    while a < x {
        let b = (2.0 * a).min(x);
        pieces.push((a, b));
        a = b;
    }
    let tol = 1e-9 / pieces.len() as f64;
    pieces.iter().map(|&(a, b)| adaptive_simpson(f, a, b, tol)).sum()
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let simpson = |a: f64, fa: f64, fm: f64, b: f64, fb: f64| (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let (fa, fb, fm) = (f(a), f(b), f((a + b) / 2.0));
    let whole = simpson(a, fa, fm, b, fb);
    let mut stack = vec![(a, b, fa, fm, fb, whole, tol, 0u32)];
    let mut total = 0.0;
    while let Some((a, b, fa, fm, fb, whole, tol, depth)) = stack.pop() {
        let m = (a + b) / 2.0;
        let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, fa, flm, m, fm);
        let right = simpson(m, fm, frm, b, fb);
        let delta = left + right - whole;
        if depth >= 50 || delta.abs() <= 15.0 * tol {
            total += left + right + delta / 15.0;
        } else {
            stack.push((a, m, fa, flm, fm, left, tol / 2.0, depth + 1));
            stack.push((m, b, fm, frm, fb, right, tol / 2.0, depth + 1));
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleCase {
    Generic,
    Rm,
    Qm,
}

impl ScheduleCase {
    pub fn exponent(self) -> f64 {
        match self {
            ScheduleCase::Generic => 0.25,
            ScheduleCase::Rm => 0.5,
            ScheduleCase::Qm => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub ell1: f64,
    pub t: usize,
}

/// Smallest sieve prime and number of sieve primes for the given case.
/// The RM schedule does not involve `d_K`.
pub fn param_schedule(
    case: ScheduleCase,
    x: f64,
    n_k: u64,
    n_a: u64,
    d_k: u64,
    c: f64,
    c1: f64,
) -> Result<Schedule, SieveError> {
    check_bound_domain(x)?;
    if n_k == 0 || n_a == 0 || d_k == 0 {
        return Err(SieveError::BadParameter("n_K, N_A and d_K must be at least 1".into()));
    }
    if !(c > 0.0) || !(c1 > 0.0) {
        return Err(SieveError::BadParameter("c and c1 must be positive".into()));
    }
    let log_x = x.ln();
    let conductor = match case {
        ScheduleCase::Rm => n_a as f64,
        _ => n_a as f64 * d_k as f64,
    };
    // log log (N x) = log(log N + log x)
    let denom = n_k as f64 * (conductor.ln() + log_x).ln();
    let ell1 = c1 * (log_x / denom).powf(case.exponent());
    let t = (c * log_x.ln()).round() as usize;
    Ok(Schedule { ell1, t })
}

/// The `t` smallest admissible primes `>= max(3, ceil(ell1))`. With `strict`,
/// also `(-1 / ell) = (2 / ell) = (3 / ell) = 1`. Gives up past `limit`.
pub fn select_primes(
    ell1: f64,
    t: usize,
    case: CaseIndex,
    ctx: &AdmissibilityContext,
    strict: bool,
    limit: u64,
) -> Option<Vec<u64>> {
    let start = (ell1.ceil().max(3.0)) as u64;
    let mut out = Vec::with_capacity(t);
    for l in start..=limit {
        if out.len() == t {
            break;
        }
        let Ok(md) = PrimeModulus::new(l) else { continue };
        if !admissible(md, case, ctx) {
            continue;
        }
        if strict && [-1, 2, 3].iter().any(|&n| legendre(n, md) != 1) {
            continue;
        }
        out.push(l);
    }
    (out.len() == t).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LI_2: f64 = 1.045_163_780_117_492_8;

    /// `li(x)` by the Ramanujan series.
    fn li_series(x: f64) -> f64 {
        let lx = x.ln();
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut inner = 0.0;
        for n in 1..400 {
            term *= lx / n as f64;
            if (n - 1) % 2 == 0 {
                inner += 1.0 / n as f64;
            }
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let add = sign * term / 2f64.powi(n as i32 - 1) * inner;
            sum += add;
            if n > 2 * lx as usize + 20 && add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        0.577_215_664_901_532_9 + lx.ln() + x.sqrt() * sum
    }

    fn cfg(x: f64, primes: Vec<u64>, i: u8) -> Result<SieveConfig, SieveError> {
        SieveConfig::new(x, primes, CaseIndex::new(i).unwrap())
    }

    #[test]
    fn nonresidue_class_counts() {
        for l in (3..=97u64).filter(|&l| is_prime(l)) {
            let md = PrimeModulus::new(l).unwrap();
            let squares: std::collections::BTreeSet<u64> = (1..l).map(|n| n * n % l).collect();
            let omega = nonresidue_classes(md);
            assert_eq!(omega.len() as u64, (l - 1) / 2);
            assert!(omega.iter().all(|n| !squares.contains(n) && *n != 0));
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(100.0, vec![5], 5).is_ok());
        assert_eq!(cfg(2.0, vec![5], 5), Err(SieveError::SmallX(2.0)));
        assert_eq!(cfg(100.0, vec![], 5), Err(SieveError::ZeroT));
        assert!(matches!(cfg(100.0, vec![5, 13, 17, 29], 5), Err(SieveError::TooManyPrimes { .. })));
        assert_eq!(cfg(100.0, vec![13, 5], 5), Err(SieveError::BadPrimeList));
        assert_eq!(cfg(100.0, vec![9], 4), Err(SieveError::BadPrimeList));
        assert!(matches!(cfg(100.0, vec![7], 5), Err(SieveError::NotAdmissible { ell: 7, i: 5 })));
        assert!(matches!(cfg(100.0, vec![5, 13], 5), Ok(_)));
        assert!(matches!(cfg(100.0, vec![5, 13, 17], 5), Err(SieveError::ProductTooLarge { .. })));
        assert!(matches!(cfg(100.0, vec![53], 5), Err(SieveError::EllTooLarge { ell: 53, .. })));
        let json = r#"{"x": 100.0, "t": 1, "primes": [5], "case": 5}"#;
        let c: SieveConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c, cfg(100.0, vec![5], 5).unwrap());
        assert!(serde_json::from_str::<SieveConfig>(r#"{"x": 100.0, "t": 1, "primes": [5], "case": 6}"#).is_err());
    }

    #[test]
    fn report_examples() {
        let c = cfg(100.0, vec![5], 5).unwrap();
        let empty = sieve_report(&[], &c).unwrap();
        assert_eq!((empty.members, empty.per_ell[0].count, empty.leftover, empty.union), (0, 0, 0, 0));
        assert!(empty.partition_exact && empty.inequality_holds);
        let primes: Vec<u64> = (2..=100).filter(|&p| is_prime(p)).collect();
        let r = sieve_report(&primes, &c).unwrap();
        assert_eq!(r.members, 25);
        assert_eq!(r.per_ell[0].count, 11);
        assert_eq!(r.leftover, 14);
        assert!(r.partition_exact && r.inequality_holds);
        assert!((r.bound_term - 100.0 / (2.0 * 20f64.ln())).abs() < 1e-12);
        assert_eq!(sieve_report(&[101], &c), Err(SieveError::BadMember(101)));
        assert_eq!(sieve_report(&[91], &c), Err(SieveError::BadMember(91)));
    }

    #[test]
    fn report_matches_direct_filter() {
        let c = cfg(5000.0, vec![5, 13, 17], 5).unwrap();
        let primes: Vec<u64> = (3..=5000).filter(|&p| is_prime(p)).collect();
        let r = sieve_report(&primes, &c).unwrap();
        for e in &r.per_ell {
            let squares: Vec<u64> = (0..e.ell).map(|n| n * n % e.ell).collect();
            let direct = primes.iter().filter(|&&p| squares.contains(&(p % e.ell))).count() as u64;
            assert_eq!(e.count, direct);
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(theorem_bound(BoundCase::Generic, E.powf(E)), Err(SieveError::BoundDomain(E.powf(E))));
        let x = E.powf(E * E);
        let direct = x * 2f64.powf(1.5) / E.powi(3);
        assert!((theorem_bound(BoundCase::Generic, x).unwrap() / direct - 1.0).abs() < 1e-12);
        let v = theorem_bound(BoundCase::RmOrQm, 1e6).unwrap();
        assert!((v - 36130.0).abs() < 20.0, "{v}");
    }

    #[test]
    fn bound_ratio_identity() {
        let (lo, hi) = (E.powf(E).ln(), 1e12f64.ln());
        for k in 1..=20 {
            let x = (lo + (hi - lo) * k as f64 / 20.0).exp();
            let ratio = theorem_bound(BoundCase::Generic, x).unwrap() / theorem_bound(BoundCase::RmOrQm, x).unwrap();
            let expected = (x.ln() / x.ln().ln()).sqrt();
            assert!((ratio / expected - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_examples() {
        let fb = FieldBudget::new(4, 4, 1, 0.0, vec![2, 3], 6).unwrap();
        assert!((chebotarev_budget(&fb, 1, 2, 100.0).unwrap().m - 24.0).abs() < 1e-9);
        let fb = FieldBudget::new(2, 2, 1, 0.0, vec![5], 5).unwrap();
        let b = chebotarev_budget(&fb, 1, 2, 100.0).unwrap();
        assert!((b.hensel_ub - (5f64.ln() + 2.0 * 2f64.ln())).abs() < 1e-9);
        assert!((b.hensel_ub - 2.996).abs() < 1e-3);
        assert!((b.upper - offset_li(100.0) / 2.0).abs() < 1e-12);
        assert!((b.upper - 14.54).abs() < 0.01);
        assert!(!b.applicable);
        assert!(chebotarev_budget(&fb, 3, 2, 100.0).is_err());
        assert!(chebotarev_budget(&fb, 1, 2, 1.5).is_err());
        assert!(FieldBudget::new(2, 3, 1, 0.0, vec![], 1).is_err());
        assert!(FieldBudget::new(2, 2, 1, 0.0, vec![3, 2], 6).is_err());
        // K = L = Q with trivial M: log x >= log x always
        let triv = FieldBudget::new(1, 1, 1, 0.0, vec![], 1).unwrap();
        assert!(chebotarev_budget(&triv, 1, 1, 1e6).unwrap().applicable);
    }

    #[test]
    fn offset_li_matches_series() {
        assert!((offset_li(100.0) + LI_2 - 30.126_141_584_079_63).abs() < 1e-8);
        for x in [3.0, 10.0, 100.0, 1e3, 1e5, 1e8, 1e12] {
            let expected = li_series(x) - LI_2;
            assert!((offset_li(x) - expected).abs() < 1e-8 * expected.max(1.0), "x={x}");
        }
        assert_eq!(offset_li(2.0), 0.0);
    }

    #[test]
    fn schedule_examples() {
        let s = param_schedule(ScheduleCase::Qm, E.powi(100), 1, 1, 1, 1.0, 1.0).unwrap();
        assert!((s.ell1 - 100.0 / 100f64.ln()).abs() < 1e-9);
        assert!((s.ell1 - 21.7).abs() < 0.05);
        assert_eq!(s.t, 5);
        let x: f64 = 1e9;
        let base = x.ln() / x.ln().ln();
        for (case, e) in [(ScheduleCase::Generic, 0.25), (ScheduleCase::Rm, 0.5), (ScheduleCase::Qm, 1.0)] {
            let s = param_schedule(case, x, 1, 1, 1, 1.0, 1.0).unwrap();
            assert!((s.ell1 - base.powf(e)).abs() < 1e-9);
        }
        // d_K enters the generic and QM schedules only
        let g = |case| param_schedule(case, x, 1, 1, 1000, 1.0, 1.0).unwrap().ell1;
        assert!(g(ScheduleCase::Generic) < base.powf(0.25));
        assert!((g(ScheduleCase::Rm) - base.sqrt()).abs() < 1e-9);
        assert!(param_schedule(ScheduleCase::Generic, E.powf(E), 1, 1, 1, 1.0, 1.0).is_err());
        assert!(param_schedule(ScheduleCase::Generic, x, 0, 1, 1, 1.0, 1.0).is_err());
        assert!(param_schedule(ScheduleCase::Generic, x, 1, 1, 1, 1.0, 0.0).is_err());
        let mut prev = f64::INFINITY;
        for c1 in [1.0, 0.5, 0.1, 1e-3, 1e-9] {
            let s = param_schedule(ScheduleCase::Rm, x, 1, 1, 1, 1.0, c1).unwrap();
            assert!(s.ell1 < prev);
            prev = s.ell1;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn prime_selection() {
        let plain = AdmissibilityContext::Plain;
        let five = CaseIndex::new(5).unwrap();
        assert_eq!(select_primes(1.4, 2, five, &plain, false, 1000), Some(vec![5, 13]));
        assert_eq!(select_primes(1.4, 2, CaseIndex::new(1).unwrap(), &plain, false, 1000), Some(vec![13, 37]));
        assert_eq!(select_primes(1.4, 2, CaseIndex::new(4).unwrap(), &plain, false, 1000), Some(vec![3, 5]));
        assert_eq!(select_primes(1.4, 2, five, &plain, true, 1000), Some(vec![73, 97]));
        assert_eq!(select_primes(14.0, 1, five, &plain, false, 1000), Some(vec![17]));
        assert_eq!(select_primes(1.0, 3, five, &plain, false, 14), None);
    }

    proptest! {
        #[test]
        fn upper_monotone_and_linear(x in 2.5f64..1e7, dx in 1.0f64..1e4, c in 1u64..50) {
            let fb = FieldBudget::new(2, 2, 1, 0.0, vec![5], 5).unwrap();
            let a = chebotarev_budget(&fb, c, 100, x).unwrap().upper;
            let b = chebotarev_budget(&fb, c, 100, x + dx).unwrap().upper;
            prop_assert!(b > a);
            let one = chebotarev_budget(&fb, 1, 100, x).unwrap().upper;
            prop_assert!((a - c as f64 * one).abs() <= 1e-12 * a);
        }
    }
}
