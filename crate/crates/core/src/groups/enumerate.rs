//! Exhaustive enumeration of subgroups and conjugacy sets at small ell, and
//! seeded random sampling for larger ell.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use super::matrix::{self, Mat2, Mat4};
use super::{
    gsp4_shape, in_conj_set, template_parameter, torus_representatives, ConjSetId, Family,
    GroupElement, SubgroupName,
};
use crate::finite_field::{linear_roots, poly, PrimeModulus};

/// Every 2x2 matrix over F_ell, in lexicographic order of entries.
pub fn all_mat2(md: PrimeModulus) -> impl Iterator<Item = Mat2> {
    let l = md.ell();
    (0..l.pow(4)).map(move |code| [[code / (l * l * l), (code / (l * l)) % l], [(code / l) % l, code % l]])
}

pub fn gl2_elements(md: PrimeModulus, sub: SubgroupName) -> Vec<Mat2> {
    let l = md.ell();
    let mut out = Vec::new();
    match sub {
        SubgroupName::Full => out.extend(all_mat2(md).filter(|m| matrix::det2(m, md) != 0)),
        SubgroupName::Borel => {
            for a in 1..l {
                for b in 0..l {
                    for d in 1..l {
                        out.push([[a, b], [0, d]]);
                    }
                }
            }
        }
        SubgroupName::Unipotent => out.extend((0..l).map(|b| [[1, b], [0, 1]])),
        SubgroupName::UnipotentPrime => {
            for a in 1..l {
                for b in 0..l {
                    out.push([[a, b], [0, a]]);
                }
            }
        }
        SubgroupName::Torus => {
            for a in 1..l {
                for d in 1..l {
                    out.push([[a, 0], [0, d]]);
                }
            }
        }
    }
    out
}

pub fn fiber_elements(md: PrimeModulus, sub: SubgroupName) -> Vec<(Mat2, Mat2)> {
    if sub == SubgroupName::UnipotentPrime {
        let l = md.ell();
        let mut out = Vec::new();
        for lam in 1..l {
            for a in 0..l {
                for b in 0..l {
                    out.push(([[lam, a], [0, lam]], [[lam, b], [0, lam]]));
                }
            }
        }
        return out;
    }
    let mut by_det: BTreeMap<u64, Vec<Mat2>> = BTreeMap::new();
    for m in gl2_elements(md, sub) {
        by_det.entry(matrix::det2(&m, md)).or_default().push(m);
    }
    let mut out = Vec::new();
    for ms in by_det.values() {
        for a in ms {
            for b in ms {
                out.push((*a, *b));
            }
        }
    }
    out
}

/// The GSp4 Borel element with `A`, `B = A S` and `D = mu (A^t)^-1`.
pub fn gsp4_borel_element(a: &Mat2, s: &Mat2, mu: u64, md: PrimeModulus) -> Mat4 {
    let inv_t = matrix::inverse2(&matrix::transpose(a), md).expect("invertible A");
    matrix::from_blocks(a, &matrix::mul(a, s, md), &[[0; 2]; 2], &matrix::scale(&inv_t, mu, md))
}

fn symmetric_mats(md: PrimeModulus) -> Vec<Mat2> {
    let l = md.ell();
    let mut out = Vec::new();
    for x in 0..l {
        for y in 0..l {
            for z in 0..l {
                out.push([[x, y], [y, z]]);
            }
        }
    }
    out
}

/// Proper subgroups of GSp4 via their parametrization by `(A, S, mu)`.
/// `Full` is only available through [`gsp4_block_scan`].
pub fn gsp4_elements(md: PrimeModulus, sub: SubgroupName) -> Vec<Mat4> {
    let l = md.ell();
    let mut out = Vec::new();
    let syms = symmetric_mats(md);
    let zero = [[0u64; 2]; 2];
    match sub {
        SubgroupName::Full => {
            gsp4_block_scan_visit(md, |m, _| out.push(*m));
        }
        SubgroupName::Borel => {
            for a in gl2_elements(md, SubgroupName::Borel) {
                for mu in 1..l {
                    for s in &syms {
                        out.push(gsp4_borel_element(&a, s, mu, md));
                    }
                }
            }
        }
        SubgroupName::Unipotent => {
            for a in gl2_elements(md, SubgroupName::Unipotent) {
                for s in &syms {
                    out.push(gsp4_borel_element(&a, s, 1, md));
                }
            }
        }
        SubgroupName::UnipotentPrime => {
            for a in gl2_elements(md, SubgroupName::UnipotentPrime) {
                let mu = md.mul(a[0][0], a[0][0]);
                for s in &syms {
                    out.push(gsp4_borel_element(&a, s, mu, md));
                }
            }
        }
        SubgroupName::Torus => {
            for a in gl2_elements(md, SubgroupName::Torus) {
                for mu in 1..l {
                    out.push(gsp4_borel_element(&a, &zero, mu, md));
                }
            }
        }
    }
    out
}

/// Orders found by scanning every block tuple `(A, B, C, D)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BlockScanCounts {
    pub tuples: u128,
    pub full: u64,
    pub borel: u64,
    pub unipotent: u64,
    pub unipotent_prime: u64,
    pub torus: u64,
}

impl BlockScanCounts {
    pub fn get(&self, sub: SubgroupName) -> u64 {
        match sub {
            SubgroupName::Full => self.full,
            SubgroupName::Borel => self.borel,
            SubgroupName::Unipotent => self.unipotent,
            SubgroupName::UnipotentPrime => self.unipotent_prime,
            SubgroupName::Torus => self.torus,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.tuples += o.tuples;
        self.full += o.full;
        self.borel += o.borel;
        self.unipotent += o.unipotent;
        self.unipotent_prime += o.unipotent_prime;
        self.torus += o.torus;
        self
    }
}

struct BlockTables {
    mats: Vec<Mat2>,
    /// `X^t Y` for every pair, indexed `x * n + y`.
    products: Vec<Mat2>,
    sym: Vec<bool>,
}

impl BlockTables {
    fn new(md: PrimeModulus) -> Self {
        let mats: Vec<Mat2> = all_mat2(md).collect();
        let n = mats.len();
        let mut products = Vec::with_capacity(n * n);
        let mut sym = Vec::with_capacity(n * n);
        for x in &mats {
            let xt = matrix::transpose(x);
            for y in &mats {
                let p = matrix::mul(&xt, y, md);
                sym.push(p[0][1] == p[1][0]);
                products.push(p);
            }
        }
        BlockTables { mats, products, sym }
    }

    /// Multiplier of `[[A, B], [C, D]]` given block indices, if symplectic.
    #[inline]
    fn multiplier(&self, a: usize, b: usize, c: usize, d: usize, md: PrimeModulus) -> Option<u64> {
        let n = self.mats.len();
        if !self.sym[a * n + c] || !self.sym[b * n + d] {
            return None;
        }
        let ad = &self.products[a * n + d];
        let cb = &self.products[c * n + b];
        let s00 = md.sub(ad[0][0], cb[0][0]);
        let ok = s00 != 0
            && ad[0][1] == cb[0][1]
            && ad[1][0] == cb[1][0]
            && md.sub(ad[1][1], cb[1][1]) == s00;
        ok.then_some(s00)
    }
}

/// Visits every symplectic similitude found in the scan of all `ell^16` block
/// tuples, in lexicographic order of block indices. Feasible for ell = 3.
pub fn gsp4_block_scan_visit(md: PrimeModulus, mut visit: impl FnMut(&Mat4, u64)) {
    let t = BlockTables::new(md);
    let n = t.mats.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !t.sym[a * n + c] {
                    continue;
                }
                for d in 0..n {
                    if let Some(mu) = t.multiplier(a, b, c, d, md) {
                        let m = matrix::from_blocks(&t.mats[a], &t.mats[b], &t.mats[c], &t.mats[d]);
                        visit(&m, mu);
                    }
                }
            }
        }
    }
}

/// Counts group and subgroup members over all `ell^16` block tuples. The
/// scan is split by the `A` block and summed, so the result does not depend
/// on scheduling.
pub fn gsp4_block_scan(md: PrimeModulus) -> BlockScanCounts {
    let t = BlockTables::new(md);
    let n = t.mats.len();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut counts = BlockScanCounts::default();
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        counts.tuples += 1;
                        let Some(mu) = t.multiplier(a, b, c, d, md) else { continue };
                        counts.full += 1;
                        let m = matrix::from_blocks(&t.mats[a], &t.mats[b], &t.mats[c], &t.mats[d]);
                        counts.borel += gsp4_shape(&m, mu, SubgroupName::Borel, md) as u64;
                        counts.unipotent += gsp4_shape(&m, mu, SubgroupName::Unipotent, md) as u64;
                        counts.unipotent_prime += gsp4_shape(&m, mu, SubgroupName::UnipotentPrime, md) as u64;
                        counts.torus += gsp4_shape(&m, mu, SubgroupName::Torus, md) as u64;
                    }
                }
            }
            counts
        })
        .reduce(BlockScanCounts::default, BlockScanCounts::merge)
}

/// Every element of the subgroup, as group elements. GSp4 `Full` goes through
/// the block scan.
pub fn subgroup_elements(family: Family, sub: SubgroupName, md: PrimeModulus) -> Vec<GroupElement> {
    match family {
        Family::GL2QM => gl2_elements(md, sub)
            .into_iter()
            .map(|m| GroupElement::from_gl2(m, md).expect("invertible"))
            .collect(),
        Family::Fiber => fiber_elements(md, sub)
            .into_iter()
            .map(|(a, b)| GroupElement::from_fiber(a, b, md).expect("valid pair"))
            .collect(),
        Family::GSp4 => gsp4_elements(md, sub)
            .into_iter()
            .map(|m| GroupElement::from_gsp4(m, md).expect("symplectic"))
            .collect(),
    }
}

/// Every GL2 element of the conjugacy set.
pub fn gl2_conj_set(id: ConjSetId, md: PrimeModulus) -> Vec<GroupElement> {
    gl2_elements(md, SubgroupName::Full)
        .into_iter()
        .map(|m| GroupElement::from_gl2(m, md).expect("invertible"))
        .filter(|g| in_conj_set(g, id))
        .collect()
}

/// Visits every fiber pair in the conjugacy set, bucketing GL2 by
/// characteristic polynomial so only matching buckets are paired. Stops
/// early when `visit` returns false. Returns the number of pairs visited.
pub fn fiber_conj_set_visit(id: ConjSetId, md: PrimeModulus, mut visit: impl FnMut(&GroupElement) -> bool) -> u64 {
    let mut buckets: BTreeMap<[u64; 2], Vec<Mat2>> = BTreeMap::new();
    for m in gl2_elements(md, SubgroupName::Full) {
        buckets.entry(matrix::char_poly2(&m, md)).or_default().push(m);
    }
    let mut visited = 0;
    for (k1, ms1) in &buckets {
        for (k2, ms2) in &buckets {
            if k1[0] != k2[0] {
                continue;
            }
            let product = matrix::quad_product(*k1, *k2, md);
            if template_parameter(id, &product, md).is_none() || linear_roots(&product, md).is_none() {
                continue;
            }
            for a in ms1 {
                for b in ms2 {
                    visited += 1;
                    let g = GroupElement::from_fiber(*a, *b, md).expect("matched determinants");
                    if !visit(&g) {
                        return visited;
                    }
                }
            }
        }
    }
    visited
}

/// Normalized torus eigenvalue tuples whose characteristic polynomial is a
/// template of the set.
pub fn matching_torus_representatives(id: ConjSetId, md: PrimeModulus) -> Vec<Vec<u64>> {
    torus_representatives(id.family(), md)
        .into_iter()
        .filter(|eig| {
            let mut c = poly::from_roots(eig, md);
            c.pop();
            template_parameter(id, &c, md).is_some()
        })
        .collect()
}

fn random_unit(md: PrimeModulus, rng: &mut impl Rng) -> u64 {
    rng.gen_range(1..md.ell())
}

fn random_residue(md: PrimeModulus, rng: &mut impl Rng) -> u64 {
    rng.gen_range(0..md.ell())
}

fn random_gl2(md: PrimeModulus, rng: &mut impl Rng) -> Mat2 {
    loop {
        let m = [
            [random_residue(md, rng), random_residue(md, rng)],
            [random_residue(md, rng), random_residue(md, rng)],
        ];
        if matrix::det2(&m, md) != 0 {
            return m;
        }
    }
}

fn random_symmetric(md: PrimeModulus, rng: &mut impl Rng) -> Mat2 {
    let y = random_residue(md, rng);
    [[random_residue(md, rng), y], [y, random_residue(md, rng)]]
}

/// A random symplectic similitude: a product of symplectic transvections
/// `x -> x + c omega(x, v) v` followed by `diag(1, 1, mu, mu)`.
pub fn random_gsp4(md: PrimeModulus, rng: &mut impl Rng) -> Mat4 {
    let mut g = matrix::identity::<4>();
    for _ in 0..12 {
        let v: Vec<u64> = (0..4).map(|_| random_residue(md, rng)).collect();
        let c = random_residue(md, rng);
        let jv = [v[2], v[3], md.neg(v[0]), md.neg(v[1])];
        let mut t = matrix::identity::<4>();
        for i in 0..4 {
            for j in 0..4 {
                t[i][j] = md.add(t[i][j], md.mul(c, md.mul(v[i], jv[j])));
            }
        }
        g = matrix::mul(&g, &t, md);
    }
    let mu = random_unit(md, rng);
    let sim = matrix::from_blocks(&matrix::identity(), &[[0; 2]; 2], &[[0; 2]; 2], &matrix::scalar(mu));
    matrix::mul(&g, &sim, md)
}

/// A random element of the whole group.
pub fn random_element(family: Family, md: PrimeModulus, rng: &mut impl Rng) -> GroupElement {
    match family {
        Family::GL2QM => GroupElement::from_gl2(random_gl2(md, rng), md).expect("invertible"),
        Family::GSp4 => GroupElement::from_gsp4(random_gsp4(md, rng), md).expect("symplectic"),
        Family::Fiber => {
            let a = random_gl2(md, rng);
            let mut b = random_gl2(md, rng);
            let s = md.mul(matrix::det2(&a, md), md.inv(matrix::det2(&b, md)).expect("invertible"));
            for row in b.iter_mut() {
                row[1] = md.mul(row[1], s);
            }
            GroupElement::from_fiber(a, b, md).expect("matched determinants")
        }
    }
}

/// A random element of a proper subgroup.
pub fn random_subgroup_element(family: Family, sub: SubgroupName, md: PrimeModulus, rng: &mut impl Rng) -> GroupElement {
    if sub == SubgroupName::Full {
        return random_element(family, md, rng);
    }
    let upper = |rng: &mut dyn rand::RngCore, d0: u64, d1: u64| -> Mat2 {
        let off = match sub {
            SubgroupName::Torus => 0,
            _ => rng.gen_range(0..md.ell()),
        };
        [[d0, off], [0, d1]]
    };
    let diag = |rng: &mut dyn rand::RngCore| -> (u64, u64) {
        match sub {
            SubgroupName::Unipotent => (1, 1),
            SubgroupName::UnipotentPrime => {
                let x = rng.gen_range(1..md.ell());
                (x, x)
            }
            _ => (rng.gen_range(1..md.ell()), rng.gen_range(1..md.ell())),
        }
    };
    match family {
        Family::GL2QM => {
            let (d0, d1) = diag(rng);
            GroupElement::from_gl2(upper(rng, d0, d1), md).expect("invertible")
        }
        Family::Fiber => {
            let (d0, d1) = diag(rng);
            let a = upper(rng, d0, d1);
            let det = md.mul(d0, d1);
            let (e0, e1) = match sub {
                SubgroupName::Unipotent | SubgroupName::UnipotentPrime => (d0, d1),
                _ => {
                    let e0 = random_unit(md, rng);
                    (e0, md.mul(det, md.inv(e0).expect("unit")))
                }
            };
            let b = upper(rng, e0, e1);
            GroupElement::from_fiber(a, b, md).expect("matched determinants")
        }
        Family::GSp4 => {
            let (d0, d1) = diag(rng);
            let a = upper(rng, d0, d1);
            let mu = match sub {
                SubgroupName::Unipotent => 1,
                SubgroupName::UnipotentPrime => md.mul(d0, d0),
                _ => random_unit(md, rng),
            };
            let s = if sub == SubgroupName::Torus { [[0; 2]; 2] } else { random_symmetric(md, rng) };
            GroupElement::from_gsp4(gsp4_borel_element(&a, &s, mu, md), md).expect("symplectic")
        }
    }
}

/// A random element of (conjugacy set ∩ Borel): a scaled matching torus
/// representative with random unipotent part. `reps` comes from
/// [`matching_torus_representatives`].
pub fn random_conj_borel(id: ConjSetId, reps: &[Vec<u64>], md: PrimeModulus, rng: &mut impl Rng) -> GroupElement {
    let rep = &reps[rng.gen_range(0..reps.len())];
    let s = random_unit(md, rng);
    let e: Vec<u64> = rep.iter().map(|&x| md.mul(x, s)).collect();
    let a = [[e[0], random_residue(md, rng)], [0, e[1]]];
    let g = match id.family() {
        Family::GL2QM => GroupElement::from_gl2(a, md),
        Family::Fiber => GroupElement::from_fiber(a, [[e[2], random_residue(md, rng)], [0, e[3]]], md),
        Family::GSp4 => {
            // eigenvalues (s, s x2, s nu, s nu / x2) need mu = s^2 nu
            let mu = md.mul(s, e[2]);
            let sym = random_symmetric(md, rng);
            GroupElement::from_gsp4(gsp4_borel_element(&a, &sym, mu, md), md)
        }
    };
    g.expect("valid construction")
}

/// A random element of the conjugacy set: a random conjugate of a random
/// element of (set ∩ Borel).
pub fn random_conj(id: ConjSetId, reps: &[Vec<u64>], md: PrimeModulus, rng: &mut impl Rng) -> GroupElement {
    let b = random_conj_borel(id, reps, md, rng);
    let g = random_element(id.family(), md, rng);
    b.conjugate_by(&g).expect("same group")
}

/// Multiplier recomputed from `M^t J M = mu J`, an independent route to the
/// block conditions.
pub fn multiplier_via_form(m: &Mat4, md: PrimeModulus) -> Option<u64> {
    let j: Mat4 = [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [md.neg(1), 0, 0, 0],
        [0, md.neg(1), 0, 0],
    ];
    let mtjm = matrix::mul(&matrix::mul(&matrix::transpose(m), &j, md), m, md);
    let mu = mtjm[0][2];
    (mu != 0 && mtjm == matrix::scale(&j, mu, md)).then_some(mu)
}

#[cfg(test)]
pub(crate) fn check_multiplier_routes(m: &Mat4, md: PrimeModulus) -> bool {
    super::multiplier_of(m, md) == multiplier_via_form(m, md)
}
