//! Matrix groups over F_ell: GL2 (quaternion case), the symplectic
//! similitude group GSp4, and the fiber product of two copies of GL2 over the
//! determinant. Each carries Borel, unipotent, scaled-unipotent and torus
//! subgroups and five (two for GL2) conjugation-invariant sets defined by
//! characteristic polynomial templates.

pub mod enumerate;
pub mod linalg;
pub mod matrix;
pub mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{linear_roots, sqrt_mod, PrimeModulus};
use crate::splitting::CaseIndex;
use matrix::{Mat2, Mat4};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("fiber components have different determinants ({0} and {1})")]
    DeterminantMismatch(u64, u64),
    #[error("matrix is not a symplectic similitude")]
    NotSymplectic,
    #[error("index {i} is not a conjugacy set of {family}")]
    IllegalIndex { family: Family, i: u8 },
    #[error("ell = {ell} does not meet the residue conditions for {id}")]
    Precondition { id: ConjSetId, ell: u64 },
    #[error("characteristic polynomial does not split into linear factors")]
    NotTriangularizable,
    #[error("operands belong to different groups")]
    Mismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    GL2QM,
    GSp4,
    Fiber,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::GL2QM, Family::GSp4, Family::Fiber];

    /// Indices of the conjugacy sets defined for this family.
    pub fn conj_indices(self) -> &'static [u8] {
        match self {
            Family::GL2QM => &[4, 5],
            _ => &[1, 2, 3, 4, 5],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::GL2QM => "GL2QM",
            Family::GSp4 => "GSp4",
            Family::Fiber => "Fiber",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupName {
    Full,
    Borel,
    Unipotent,
    UnipotentPrime,
    Torus,
}

impl SubgroupName {
    pub const ALL: [SubgroupName; 5] = [
        SubgroupName::Full,
        SubgroupName::Borel,
        SubgroupName::Unipotent,
        SubgroupName::UnipotentPrime,
        SubgroupName::Torus,
    ];
}

impl fmt::Display for SubgroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubgroupName::Full => "Full",
            SubgroupName::Borel => "Borel",
            SubgroupName::Unipotent => "Unipotent",
            SubgroupName::UnipotentPrime => "UnipotentPrime",
            SubgroupName::Torus => "Torus",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConjSetId {
    family: Family,
    i: u8,
}

impl ConjSetId {
    pub fn new(family: Family, i: u8) -> Result<Self, GroupError> {
        if family.conj_indices().contains(&i) {
            Ok(ConjSetId { family, i })
        } else {
            Err(GroupError::IllegalIndex { family, i })
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn index(self) -> u8 {
        self.i
    }

    /// Every legal id, families in declaration order.
    pub fn all() -> Vec<ConjSetId> {
        Family::ALL
            .iter()
            .flat_map(|&f| f.conj_indices().iter().map(move |&i| ConjSetId { family: f, i }))
            .collect()
    }
}

impl fmt::Display for ConjSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.family, self.i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entries {
    Gl2(Mat2),
    Gsp4(Mat4),
    Fiber(Mat2, Mat2),
}

/// An element of one of the three groups over F_ell, validated on
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    modulus: PrimeModulus,
    entries: Entries,
    mu: Option<u64>,
}

/// Similitude multiplier of a 4x4 matrix: the `mu` with `A^t C` and
/// `B^t D` symmetric and `A^t D - C^t B = mu I`, for blocks
/// `[[A, B], [C, D]]`.
pub fn multiplier_of(m: &Mat4, md: PrimeModulus) -> Option<u64> {
    use matrix::{blocks, mul, sub, transpose};
    let (a, b, c, d) = blocks(m);
    let atc = mul(&transpose(&a), &c, md);
    let btd = mul(&transpose(&b), &d, md);
    if atc[0][1] != atc[1][0] || btd[0][1] != btd[1][0] {
        return None;
    }
    let s = sub(&mul(&transpose(&a), &d, md), &mul(&transpose(&c), &b, md), md);
    (s[0][1] == 0 && s[1][0] == 0 && s[0][0] == s[1][1] && s[0][0] != 0).then_some(s[0][0])
}

impl GroupElement {
    pub(crate) fn from_gl2(m: Mat2, md: PrimeModulus) -> Result<Self, GroupError> {
        if matrix::det2(&m, md) == 0 {
            return Err(GroupError::Singular);
        }
        Ok(GroupElement { modulus: md, entries: Entries::Gl2(m), mu: None })
    }

    pub(crate) fn from_gsp4(m: Mat4, md: PrimeModulus) -> Result<Self, GroupError> {
        let mu = multiplier_of(&m, md).ok_or(GroupError::NotSymplectic)?;
        Ok(GroupElement { modulus: md, entries: Entries::Gsp4(m), mu: Some(mu) })
    }

    pub(crate) fn from_fiber(m1: Mat2, m2: Mat2, md: PrimeModulus) -> Result<Self, GroupError> {
        let (d1, d2) = (matrix::det2(&m1, md), matrix::det2(&m2, md));
        if d1 == 0 || d2 == 0 {
            return Err(GroupError::Singular);
        }
        if d1 != d2 {
            return Err(GroupError::DeterminantMismatch(d1, d2));
        }
        Ok(GroupElement { modulus: md, entries: Entries::Fiber(m1, m2), mu: None })
    }

    pub fn gl2(m: [[i64; 2]; 2], ell: PrimeModulus) -> Result<Self, GroupError> {
        Self::from_gl2(matrix::reduce(&m, ell), ell)
    }

    pub fn gsp4(m: [[i64; 4]; 4], ell: PrimeModulus) -> Result<Self, GroupError> {
        Self::from_gsp4(matrix::reduce(&m, ell), ell)
    }

    pub fn fiber(m1: [[i64; 2]; 2], m2: [[i64; 2]; 2], ell: PrimeModulus) -> Result<Self, GroupError> {
        Self::from_fiber(matrix::reduce(&m1, ell), matrix::reduce(&m2, ell), ell)
    }

    pub fn identity(family: Family, ell: PrimeModulus) -> Self {
        let entries = match family {
            Family::GL2QM => Entries::Gl2(matrix::identity()),
            Family::GSp4 => Entries::Gsp4(matrix::identity()),
            Family::Fiber => Entries::Fiber(matrix::identity(), matrix::identity()),
        };
        let mu = (family == Family::GSp4).then_some(1);
        GroupElement { modulus: ell, entries, mu }
    }

    pub fn family(&self) -> Family {
        match self.entries {
            Entries::Gl2(_) => Family::GL2QM,
            Entries::Gsp4(_) => Family::GSp4,
            Entries::Fiber(..) => Family::Fiber,
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    /// Similitude multiplier (GSp4 only).
    pub fn mu(&self) -> Option<u64> {
        self.mu
    }

    /// Determinant; the common determinant for fiber pairs.
    pub fn determinant(&self) -> u64 {
        let md = self.modulus;
        match &self.entries {
            Entries::Gl2(m) | Entries::Fiber(m, _) => matrix::det2(m, md),
            Entries::Gsp4(m) => matrix::det(m, md),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, GroupError> {
        if self.modulus != rhs.modulus {
            return Err(GroupError::Mismatch);
        }
        let md = self.modulus;
        match (&self.entries, &rhs.entries) {
            (Entries::Gl2(a), Entries::Gl2(b)) => Ok(GroupElement {
                entries: Entries::Gl2(matrix::mul(a, b, md)),
                ..*self
            }),
            (Entries::Gsp4(a), Entries::Gsp4(b)) => Ok(GroupElement {
                entries: Entries::Gsp4(matrix::mul(a, b, md)),
                mu: Some(md.mul(self.mu.expect("GSp4 multiplier"), rhs.mu.expect("GSp4 multiplier"))),
                modulus: md,
            }),
            (Entries::Fiber(a1, a2), Entries::Fiber(b1, b2)) => Ok(GroupElement {
                entries: Entries::Fiber(matrix::mul(a1, b1, md), matrix::mul(a2, b2, md)),
                ..*self
            }),
            _ => Err(GroupError::Mismatch),
        }
    }

    pub fn inverse(&self) -> Self {
        let md = self.modulus;
        let entries = match &self.entries {
            Entries::Gl2(m) => Entries::Gl2(matrix::inverse2(m, md).expect("invertible")),
            Entries::Gsp4(m) => Entries::Gsp4(matrix::inverse(m, md).expect("invertible")),
            Entries::Fiber(a, b) => {
                Entries::Fiber(matrix::inverse2(a, md).expect("invertible"), matrix::inverse2(b, md).expect("invertible"))
            }
        };
        let mu = self.mu.map(|m| md.inv(m).expect("nonzero multiplier"));
        GroupElement { modulus: md, entries, mu }
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self, GroupError> {
        g.inverse().mul(self)?.mul(g)
    }

    /// Lower coefficients of the monic characteristic polynomial (length 2
    /// for GL2, 4 otherwise).
    pub fn char_poly(&self) -> Vec<u64> {
        let md = self.modulus;
        match &self.entries {
            Entries::Gl2(m) => matrix::char_poly2(m, md).to_vec(),
            Entries::Gsp4(m) => matrix::char_poly4(m, md).to_vec(),
            Entries::Fiber(a, b) => {
                matrix::quad_product(matrix::char_poly2(a, md), matrix::char_poly2(b, md), md).to_vec()
            }
        }
    }

    /// Eigenvalues with multiplicity when the characteristic polynomial
    /// splits over F_ell, ascending.
    pub fn split_roots(&self) -> Option<Vec<u64>> {
        let mut roots = match triangular_diagonal(&self.entries) {
            Some(d) => d,
            None => linear_roots(&self.char_poly(), self.modulus)?,
        };
        roots.sort_unstable();
        Some(roots)
    }
}

/// Diagonal entries when the element is visibly triangular, which are then
/// its eigenvalues.
fn triangular_diagonal(e: &Entries) -> Option<Vec<u64>> {
    let tri2 = |m: &Mat2| m[1][0] == 0 || m[0][1] == 0;
    match e {
        Entries::Gl2(m) => tri2(m).then(|| vec![m[0][0], m[1][1]]),
        Entries::Fiber(a, b) => (tri2(a) && tri2(b)).then(|| vec![a[0][0], a[1][1], b[0][0], b[1][1]]),
        Entries::Gsp4(m) => {
            let (a, _, c, d) = matrix::blocks(m);
            (c == [[0; 2]; 2] && tri2(&a) && tri2(&d)).then(|| vec![a[0][0], a[1][1], d[0][0], d[1][1]])
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.entries {
            Entries::Gl2(m) => write!(f, "{m:?} mod {}", self.modulus),
            Entries::Gsp4(m) => write!(f, "{m:?} mod {}", self.modulus),
            Entries::Fiber(a, b) => write!(f, "({a:?}, {b:?}) mod {}", self.modulus),
        }
    }
}

/// Closed-form group orders.
pub fn group_order(family: Family, sub: SubgroupName, ell: PrimeModulus) -> u128 {
    let l = ell.ell() as u128;
    let lm = l - 1;
    match (family, sub) {
        (Family::GL2QM, SubgroupName::Full) => lm * lm * l * (l + 1),
        (Family::GL2QM, SubgroupName::Borel) => lm * lm * l,
        (Family::GL2QM, SubgroupName::Unipotent) => l,
        (Family::GL2QM, SubgroupName::UnipotentPrime) => l * lm,
        (Family::GL2QM, SubgroupName::Torus) => lm * lm,
        (Family::GSp4, SubgroupName::Full) => lm.pow(3) * l.pow(4) * (l + 1).pow(2) * (l * l + 1),
        (Family::GSp4, SubgroupName::Borel) => l.pow(4) * lm.pow(3),
        (Family::GSp4, SubgroupName::Unipotent) => l.pow(4),
        (Family::GSp4, SubgroupName::UnipotentPrime) => l.pow(4) * lm,
        (Family::GSp4, SubgroupName::Torus) => lm.pow(3),
        (Family::Fiber, SubgroupName::Full) => lm.pow(3) * l * l * (l + 1).pow(2),
        (Family::Fiber, SubgroupName::Borel) => lm.pow(3) * l * l,
        (Family::Fiber, SubgroupName::Unipotent) => l * l,
        (Family::Fiber, SubgroupName::UnipotentPrime) => l * l * lm,
        (Family::Fiber, SubgroupName::Torus) => lm.pow(3),
    }
}

/// Similitude multiplier of a GSp4 element, recomputed from its blocks.
pub fn multiplier(m: &GroupElement) -> Option<u64> {
    match &m.entries {
        Entries::Gsp4(x) => multiplier_of(x, m.modulus),
        _ => None,
    }
}

fn gl2_shape(m: &Mat2, sub: SubgroupName) -> bool {
    match sub {
        SubgroupName::Full => true,
        SubgroupName::Borel => m[1][0] == 0,
        SubgroupName::Unipotent => m[1][0] == 0 && m[0][0] == 1 && m[1][1] == 1,
        SubgroupName::UnipotentPrime => m[1][0] == 0 && m[0][0] == m[1][1],
        SubgroupName::Torus => m[1][0] == 0 && m[0][1] == 0,
    }
}

pub(crate) fn gsp4_shape(m: &Mat4, mu: u64, sub: SubgroupName, md: PrimeModulus) -> bool {
    let (a, b, c, _) = matrix::blocks(m);
    let borel = c == [[0; 2]; 2] && a[1][0] == 0;
    match sub {
        SubgroupName::Full => true,
        SubgroupName::Borel => borel,
        SubgroupName::Unipotent => borel && a[0][0] == 1 && a[1][1] == 1 && mu == 1,
        SubgroupName::UnipotentPrime => borel && a[0][0] == a[1][1] && mu == md.mul(a[0][0], a[0][0]),
        SubgroupName::Torus => borel && b == [[0; 2]; 2] && a[0][1] == 0,
    }
}

pub fn is_member(m: &GroupElement, sub: SubgroupName) -> bool {
    match &m.entries {
        Entries::Gl2(x) => gl2_shape(x, sub),
        Entries::Gsp4(x) => gsp4_shape(x, m.mu.expect("GSp4 multiplier"), sub, m.modulus),
        Entries::Fiber(a, b) => {
            gl2_shape(a, sub)
                && gl2_shape(b, sub)
                && (sub != SubgroupName::UnipotentPrime || a[0][0] == b[0][0])
        }
    }
}

/// Lower coefficients of the i-th template polynomial with parameter `mu`.
pub fn template(id: ConjSetId, mu: u64, md: PrimeModulus) -> Vec<u64> {
    let sq = md.mul(mu, mu);
    match (id.family, id.i) {
        (Family::GL2QM, 4) => vec![md.neg(mu), 0],
        (Family::GL2QM, _) => vec![mu, 0],
        (_, 1) => vec![sq, 0, mu, 0],
        (_, 2) => vec![sq, 0, md.neg(mu), 0],
        (_, 3) => vec![sq, 0, 0, 0],
        (_, 4) => vec![sq, 0, md.neg(md.add(mu, mu)), 0],
        (_, _) => vec![sq, 0, md.add(mu, mu), 0],
    }
}

/// Some nonzero `mu` with `template(id, mu) == c`, if one exists.
pub fn template_parameter(id: ConjSetId, c: &[u64], md: PrimeModulus) -> Option<u64> {
    let candidate = match (id.family, id.i) {
        (Family::GL2QM, 4) => md.neg(c[0]),
        (Family::GL2QM, _) => c[0],
        (_, 1) => c[2],
        (_, 2) => md.neg(c[2]),
        (_, 3) => sqrt_mod(c[0] as i64, md)?,
        (_, 4) => md.neg(md.mul(c[2], md.inv(2).expect("odd prime"))),
        (_, _) => md.mul(c[2], md.inv(2).expect("odd prime")),
    };
    (candidate != 0 && template(id, candidate, md) == c).then_some(candidate)
}

/// Membership in the i-th conjugacy set: the characteristic polynomial is
/// the i-th template for some `mu` in F_ell^* and splits into linear factors.
pub fn in_conj_set(m: &GroupElement, id: ConjSetId) -> bool {
    m.family() == id.family
        && template_parameter(id, &m.char_poly(), m.modulus).is_some()
        && m.split_roots().is_some()
}

/// The template parameter tied to the element: the multiplier for GSp4, the
/// common determinant for fiber pairs, and for GL2 the value forced by the
/// determinant.
pub fn bound_parameter(m: &GroupElement, id: ConjSetId) -> u64 {
    let md = m.modulus;
    match m.family() {
        Family::GSp4 => m.mu.expect("GSp4 multiplier"),
        Family::Fiber => m.determinant(),
        Family::GL2QM if id.i == 4 => md.neg(m.determinant()),
        Family::GL2QM => m.determinant(),
    }
}

/// Membership with `mu` fixed by [`bound_parameter`].
pub fn in_conj_set_bound_mu(m: &GroupElement, id: ConjSetId) -> bool {
    m.family() == id.family
        && m.char_poly() == template(id, bound_parameter(m, id), m.modulus)
        && m.split_roots().is_some()
}

/// Whether the explicit witness construction applies at ell.
pub fn witness_available(id: ConjSetId, ell: PrimeModulus) -> bool {
    match id.family {
        Family::GL2QM => ell.ell() >= 5,
        _ => CaseIndex::new(id.i).expect("legal index").plain_admissible(ell.ell()),
    }
}

/// `a^2` in the factorization `T_i(1) = (X^2 + aX + 1)(X^2 - aX + 1)`.
fn witness_square(i: u8) -> i64 {
    match i {
        1 => 1,
        2 => 3,
        3 => 2,
        4 => 4,
        _ => 0,
    }
}

/// An explicit element of the conjugacy set.
pub fn witness(id: ConjSetId, ell: PrimeModulus) -> Result<GroupElement, GroupError> {
    if !witness_available(id, ell) {
        return Err(GroupError::Precondition { id, ell: ell.ell() });
    }
    let md = ell;
    let l = ell.ell();
    let w = match id.family {
        Family::GL2QM => GroupElement::from_gl2([[2, 0], [0, l - 2]], md)?,
        family => {
            let a = sqrt_mod(witness_square(id.i), md).ok_or(GroupError::Precondition { id, ell: l })?;
            let plus = matrix::companion(1, a, md);
            let minus = matrix::companion(1, md.neg(a), md);
            if family == Family::Fiber {
                GroupElement::from_fiber(plus, minus, md)?
            } else {
                GroupElement::from_gsp4(matrix::interleave(&plus, &minus), md)?
            }
        }
    };
    if !in_conj_set(&w, id) {
        return Err(GroupError::Precondition { id, ell: l });
    }
    Ok(w)
}

fn distinct(roots: &[u64]) -> Vec<u64> {
    let mut r = roots.to_vec();
    r.sort_unstable();
    r.dedup();
    r
}

fn eigenvector_candidates<const N: usize>(m: &matrix::Mat<N>, roots: &[u64], md: PrimeModulus) -> Option<Vec<u64>> {
    distinct(roots)
        .into_iter()
        .filter_map(|k| {
            let shifted = matrix::sub(m, &matrix::scalar(k), md);
            let rows: Vec<Vec<u64>> = shifted.iter().map(|r| r.to_vec()).collect();
            linalg::smallest_normalized(&linalg::nullspace(&rows, N, md), md)
        })
        .min()
}

/// Basis change putting a split 2x2 matrix in upper-triangular form.
fn gl2_flag(m: &Mat2, roots: &[u64], md: PrimeModulus) -> Mat2 {
    let v = eigenvector_candidates(m, roots, md).expect("split matrix has an eigenvector");
    if v[0] != 0 {
        [[v[0], 0], [v[1], 1]]
    } else {
        [[0, 1], [v[1], 0]]
    }
}

/// `omega(x, y) = x^t J y` with `J = [[0, I], [-I, 0]]`.
pub(crate) fn omega(x: &[u64], y: &[u64], md: PrimeModulus) -> u64 {
    let pos = md.add(md.mul(x[0], y[2]), md.mul(x[1], y[3]));
    let neg = md.add(md.mul(x[2], y[0]), md.mul(x[3], y[1]));
    md.sub(pos, neg)
}

/// Linear form `y -> omega(x, y)` as a coefficient row.
fn omega_row(x: &[u64], md: PrimeModulus) -> Vec<u64> {
    vec![md.neg(x[2]), md.neg(x[3]), x[0], x[1]]
}

/// Some `f` with `omega(e1, f) = t1` and `omega(e2, f) = t2`.
fn solve_pairing(e1: &[u64], e2: &[u64], t1: u64, t2: u64, md: PrimeModulus) -> Option<Vec<u64>> {
    let mut r1 = omega_row(e1, md);
    r1.push(md.neg(t1));
    let mut r2 = omega_row(e2, md);
    r2.push(md.neg(t2));
    let ns = linalg::nullspace(&[r1, r2], 5, md);
    let v = ns.into_iter().find(|v| v[4] != 0)?;
    let inv = md.inv(v[4])?;
    Some(v[..4].iter().map(|&x| md.mul(x, inv)).collect())
}

/// Symplectic basis change `g` (with `g^t J g = J`) whose first two columns
/// span an invariant Lagrangian plane carrying an invariant line.
fn gsp4_flag(m: &Mat4, roots: &[u64], md: PrimeModulus) -> Option<Mat4> {
    let e1 = eigenvector_candidates(m, roots, md)?;
    let mut e2 = None;
    for k in distinct(roots) {
        // unknowns (v, c): (m - k) v - c e1 = 0 and omega(e1, v) = 0
        let mut rows: Vec<Vec<u64>> = (0..4)
            .map(|i| {
                let mut r: Vec<u64> = (0..4).map(|j| if i == j { md.sub(m[i][j], k) } else { m[i][j] }).collect();
                r.push(md.neg(e1[i]));
                r
            })
            .collect();
        let mut w = omega_row(&e1, md);
        w.push(0);
        rows.push(w);
        let found = linalg::nullspace(&rows, 5, md)
            .into_iter()
            .map(|v| v[..4].to_vec())
            .find(|v| linalg::rank(&[e1.clone(), v.clone()], md) == 2);
        if found.is_some() {
            e2 = found;
            break;
        }
    }
    let e2 = e2?;
    let f1 = solve_pairing(&e1, &e2, 1, 0, md)?;
    let f2 = solve_pairing(&e1, &e2, 0, 1, md)?;
    let c = omega(&f1, &f2, md);
    let f2: Vec<u64> = f2.iter().zip(&e1).map(|(&f, &e)| md.add(f, md.mul(c, e))).collect();
    let mut g = [[0u64; 4]; 4];
    for (j, col) in [&e1, &e2, &f1, &f2].into_iter().enumerate() {
        for i in 0..4 {
            g[i][j] = col[i];
        }
    }
    Some(g)
}

/// Returns `(g, b)` with `b = g^-1 m g` in the Borel subgroup.
pub fn conjugate_into_borel(m: &GroupElement) -> Result<(GroupElement, GroupElement), GroupError> {
    let md = m.modulus;
    if is_member(m, SubgroupName::Borel) {
        return Ok((GroupElement::identity(m.family(), md), *m));
    }
    let roots = m.split_roots().ok_or(GroupError::NotTriangularizable)?;
    let g = match &m.entries {
        Entries::Gl2(x) => GroupElement::from_gl2(gl2_flag(x, &roots, md), md)?,
        Entries::Fiber(a, b) => {
            let ra = linear_roots(&matrix::char_poly2(a, md), md).ok_or(GroupError::NotTriangularizable)?;
            let rb = linear_roots(&matrix::char_poly2(b, md), md).ok_or(GroupError::NotTriangularizable)?;
            let g1 = if gl2_shape(a, SubgroupName::Borel) { matrix::identity() } else { gl2_flag(a, &ra, md) };
            let mut g2 = if gl2_shape(b, SubgroupName::Borel) { matrix::identity() } else { gl2_flag(b, &rb, md) };
            let s = md.mul(matrix::det2(&g1, md), md.inv(matrix::det2(&g2, md)).expect("invertible"));
            for row in g2.iter_mut() {
                row[1] = md.mul(row[1], s);
            }
            GroupElement::from_fiber(g1, g2, md)?
        }
        Entries::Gsp4(x) => GroupElement::from_gsp4(gsp4_flag(x, &roots, md).ok_or(GroupError::NotTriangularizable)?, md)?,
    };
    let b = m.conjugate_by(&g)?;
    debug_assert!(is_member(&b, SubgroupName::Borel));
    Ok((g, b))
}

/// Eigenvalues of the normalized torus representatives of Borel modulo the
/// scaled unipotent subgroup, i.e. torus elements up to scalars with first
/// diagonal entry 1.
pub fn torus_representatives(family: Family, md: PrimeModulus) -> Vec<Vec<u64>> {
    let l = md.ell();
    let units = 1..l;
    match family {
        Family::GL2QM => units.map(|x| vec![1, x]).collect(),
        Family::Fiber => {
            let mut out = Vec::with_capacity(((l - 1) * (l - 1)) as usize);
            for x3 in 1..l {
                for x4 in 1..l {
                    out.push(vec![1, md.mul(x3, x4), x3, x4]);
                }
            }
            out
        }
        Family::GSp4 => {
            let mut out = Vec::with_capacity(((l - 1) * (l - 1)) as usize);
            for x2 in 1..l {
                let inv = md.inv(x2).expect("unit");
                for nu in 1..l {
                    out.push(vec![1, x2, nu, md.mul(nu, inv)]);
                }
            }
            out
        }
    }
}

/// Size of the image of (conjugacy set ∩ Borel) in Borel modulo the scaled
/// unipotent subgroup. The sets are stable under scalars, so testing the
/// normalized representative of each class suffices.
pub fn quotient_image_size(id: ConjSetId, ell: PrimeModulus) -> Result<u64, GroupError> {
    if !witness_available(id, ell) {
        return Err(GroupError::Precondition { id, ell: ell.ell() });
    }
    let count = enumerate::matching_torus_representatives(id, ell).len();
    Ok(count as u64)
}
