//! Admissible auxiliary primes for the five supersingular templates and the
//! Legendre-symbol criterion for their complete splitting mod ell.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{is_prime, legendre, quartic_linear_roots, PrimeModulus};
use crate::weil::{is_squarefree, SimpleVariant, SurfaceClass, WeilError, WeilQuartic};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("case index {0} is outside 1..=5")]
    BadCase(u8),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("templates are defined here for p >= 7, got {0}")]
    SmallPrime(u64),
    #[error("ell = {ell} is not admissible for case {i}")]
    NotAdmissible { ell: u64, i: u8 },
    #[error("d = {0} is not a squarefree integer > 1")]
    BadDiscriminant(i64),
    #[error("quaternion discriminant must be at least 1")]
    BadQuaternionDiscriminant,
    #[error(transparent)]
    Weil(#[from] WeilError),
}

/// Which of the five supersingular templates is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct CaseIndex(u8);

impl CaseIndex {
    pub const ALL: [CaseIndex; 5] = [CaseIndex(1), CaseIndex(2), CaseIndex(3), CaseIndex(4), CaseIndex(5)];

    pub fn new(i: u8) -> Result<Self, SplittingError> {
        if (1..=5).contains(&i) {
            Ok(CaseIndex(i))
        } else {
            Err(SplittingError::BadCase(i))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// `a2` of the template as a multiple of p: `+p, -p, 0, -2p, +2p`.
    pub fn a2_multiple(self) -> i64 {
        match self.0 {
            1 => 1,
            2 => -1,
            3 => 0,
            4 => -2,
            _ => 2,
        }
    }

    /// The supersingular class of the i-th template.
    pub fn surface_class(self) -> SurfaceClass {
        match self.0 {
            1 => SurfaceClass::SimpleSS(SimpleVariant::PlusP),
            2 => SurfaceClass::SimpleSS(SimpleVariant::MinusP),
            3 => SurfaceClass::SimpleSS(SimpleVariant::Zero),
            4 => SurfaceClass::SimpleSS(SimpleVariant::MinusTwoP),
            _ => SurfaceClass::SplitSS,
        }
    }

    /// The plain congruence condition on ell.
    pub fn plain_admissible(self, ell: u64) -> bool {
        match self.0 {
            1 | 2 => ell % 12 == 1,
            3 => ell % 8 == 1,
            4 => true,
            _ => ell % 4 == 1,
        }
    }
}

impl TryFrom<u8> for CaseIndex {
    type Error = SplittingError;
    fn try_from(i: u8) -> Result<Self, SplittingError> {
        CaseIndex::new(i)
    }
}

impl From<CaseIndex> for u8 {
    fn from(c: CaseIndex) -> u8 {
        c.0
    }
}

impl fmt::Display for CaseIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Extra conditions on ell depending on the endomorphism structure.
/// Ramification of ell in the base field is given as an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdmissibilityContext {
    Plain,
    Rm { d: i64, ramified: Vec<u64> },
    Qm { disc: u64, ramified: Vec<u64> },
}

impl AdmissibilityContext {
    pub fn rm(d: i64, ramified: Vec<u64>) -> Result<Self, SplittingError> {
        if d <= 1 || !is_squarefree(d) {
            return Err(SplittingError::BadDiscriminant(d));
        }
        Ok(AdmissibilityContext::Rm { d, ramified })
    }

    pub fn qm(disc: u64, ramified: Vec<u64>) -> Result<Self, SplittingError> {
        if disc == 0 {
            return Err(SplittingError::BadQuaternionDiscriminant);
        }
        Ok(AdmissibilityContext::Qm { disc, ramified })
    }
}

pub fn admissible(ell: PrimeModulus, i: CaseIndex, ctx: &AdmissibilityContext) -> bool {
    let l = ell.ell();
    if !i.plain_admissible(l) {
        return false;
    }
    match ctx {
        AdmissibilityContext::Plain => true,
        AdmissibilityContext::Rm { d, ramified } => legendre(-d, ell) == 1 && !ramified.contains(&l),
        AdmissibilityContext::Qm { disc, ramified } => l > 7 && disc % l != 0 && !ramified.contains(&l),
    }
}

/// ell splits in `Q(sqrt d)`: the alternative rendering of the RM condition.
pub fn splits_in_real_quadratic(d: i64, ell: PrimeModulus) -> bool {
    legendre(d, ell) == 1
}

fn template_a2(i: CaseIndex, p: i64) -> i64 {
    i.a2_multiple() * p
}

/// The i-th supersingular Frobenius quartic over F_p.
pub fn ss_template(i: CaseIndex, p: u64) -> Result<WeilQuartic, SplittingError> {
    if !is_prime(p) {
        return Err(SplittingError::NotPrime(p));
    }
    if p < 7 {
        return Err(SplittingError::SmallPrime(p));
    }
    let p = p as i64;
    Ok(WeilQuartic::prime(0, template_a2(i, p), p)?)
}

/// Predicted splitting of the i-th template mod ell: `(p / ell) != -1`.
pub fn splits_by_legendre(p: u64, ell: PrimeModulus, i: CaseIndex) -> Result<bool, SplittingError> {
    if !is_prime(p) {
        return Err(SplittingError::NotPrime(p));
    }
    if !i.plain_admissible(ell.ell()) {
        return Err(SplittingError::NotAdmissible { ell: ell.ell(), i: i.get() });
    }
    Ok(legendre(p as i64, ell) != -1)
}

/// Roots of the i-th template reduced mod ell, when it splits completely.
pub fn template_roots(p: u64, ell: PrimeModulus, i: CaseIndex) -> Option<[u64; 4]> {
    let p = p as i64;
    let c2 = ell.reduce(template_a2(i, p));
    let c0 = ell.reduce_i128(p as i128 * p as i128);
    quartic_linear_roots(0, c2, 0, c0, ell)
}

/// Actual splitting of the i-th template mod ell.
pub fn splits_by_factorization(p: u64, ell: PrimeModulus, i: CaseIndex) -> bool {
    template_roots(p, ell, i).is_some()
}
