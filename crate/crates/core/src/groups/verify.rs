//! Structural checks on the three group families, reported as pass/fail
//! entries with a counterexample on failure.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::{
    fiber_conj_set_visit, gl2_conj_set, gsp4_block_scan, gsp4_block_scan_visit, matching_torus_representatives,
    random_conj, random_conj_borel, random_subgroup_element, subgroup_elements,
};
use super::{
    conjugate_into_borel, group_order, in_conj_set, is_member, quotient_image_size, witness, witness_available,
    ConjSetId, Entries, Family, GroupElement, SubgroupName,
};
use crate::finite_field::{is_prime, PrimeModulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCheck {
    pub check: String,
    pub family: Family,
    pub subject: String,
    pub ell: u64,
    pub status: CheckStatus,
    pub checked: u64,
    pub detail: Option<String>,
    pub counterexample: Option<String>,
}

impl GroupCheck {
    fn new(check: &str, family: Family, subject: impl ToString, ell: u64) -> Self {
        GroupCheck {
            check: check.to_string(),
            family,
            subject: subject.to_string(),
            ell,
            status: CheckStatus::Pass,
            checked: 0,
            detail: None,
            counterexample: None,
        }
    }

    fn fail(&mut self, counterexample: String) {
        self.status = CheckStatus::Fail;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

fn modulus(ell: u64) -> PrimeModulus {
    PrimeModulus::new(ell).expect("odd prime")
}

/// Subgroup order by enumeration against the closed form. GSp4 `Full` uses
/// the block-tuple scan.
pub fn check_order(family: Family, sub: SubgroupName, ell: u64) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new("order", family, sub, ell);
    let counted = if family == Family::GSp4 && sub == SubgroupName::Full {
        gsp4_block_scan(md).full as u128
    } else {
        subgroup_elements(family, sub, md).len() as u128
    };
    let expected = group_order(family, sub, md);
    c.checked = counted as u64;
    c.detail = Some(format!("enumerated {counted}, formula {expected}"));
    if counted != expected {
        c.fail(format!("enumerated {counted} != {expected}"));
    }
    c
}

/// All GSp4 subgroup orders from one scan of the `ell^16` block tuples.
pub fn check_orders_block_scan(ell: u64) -> Vec<GroupCheck> {
    let md = modulus(ell);
    let counts = gsp4_block_scan(md);
    SubgroupName::ALL
        .iter()
        .map(|&sub| {
            let mut c = GroupCheck::new("order_block_scan", Family::GSp4, sub, ell);
            let expected = group_order(Family::GSp4, sub, md);
            c.checked = counts.tuples as u64;
            c.detail = Some(format!("scanned {} tuples, found {}, formula {expected}", counts.tuples, counts.get(sub)));
            if counts.get(sub) as u128 != expected {
                c.fail(format!("found {} != {expected}", counts.get(sub)));
            }
            c
        })
        .collect()
}

/// `b^-1 u b` stays in U and in U' for every Borel `b`.
pub fn check_normality(family: Family, ell: u64) -> Vec<GroupCheck> {
    let md = modulus(ell);
    let borel = subgroup_elements(family, SubgroupName::Borel, md);
    [SubgroupName::Unipotent, SubgroupName::UnipotentPrime]
        .iter()
        .map(|&sub| {
            let mut c = GroupCheck::new("normality", family, sub, ell);
            let members = subgroup_elements(family, sub, md);
            'outer: for b in &borel {
                for u in &members {
                    c.checked += 1;
                    let conj = u.conjugate_by(b).expect("same group");
                    if !is_member(&conj, sub) {
                        c.fail(format!("u = {u}, b = {b}, b^-1 u b = {conj}"));
                        break 'outer;
                    }
                }
            }
            c
        })
        .collect()
}

/// Torus coordinates of a Borel element: diagonal entries, and for GSp4 the
/// multiplier in place of the D block.
pub fn torus_projection(g: &GroupElement) -> Vec<u64> {
    match g.entries() {
        Entries::Gl2(m) => vec![m[0][0], m[1][1]],
        Entries::Fiber(a, b) => vec![a[0][0], a[1][1], b[0][0], b[1][1]],
        Entries::Gsp4(m) => vec![m[0][0], m[1][1], g.mu().expect("multiplier")],
    }
}

/// Commutators of Borel elements lie in U, and the torus projection is a
/// homomorphism on Borel with kernel exactly U.
pub fn check_quotient_abelian(family: Family, ell: u64) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new("borel_mod_unipotent_is_torus", family, SubgroupName::Borel, ell);
    let borel = subgroup_elements(family, SubgroupName::Borel, md);
    let one = torus_projection(&GroupElement::identity(family, md));
    let mut kernel = 0u64;
    for x in &borel {
        let px = torus_projection(x);
        if px == one {
            kernel += 1;
            if !is_member(x, SubgroupName::Unipotent) {
                c.fail(format!("{x} projects to 1 but is not unipotent"));
            }
        }
        for y in &borel {
            c.checked += 1;
            let xy = x.mul(y).expect("same group");
            let py = torus_projection(y);
            let expected: Vec<u64> = px.iter().zip(&py).map(|(&a, &b)| md.mul(a, b)).collect();
            if torus_projection(&xy) != expected {
                c.fail(format!("projection not multiplicative at x = {x}, y = {y}"));
            }
            let comm = x.inverse().mul(&y.inverse()).and_then(|z| z.mul(x)).and_then(|z| z.mul(y)).expect("same group");
            if !is_member(&comm, SubgroupName::Unipotent) {
                c.fail(format!("commutator of {x} and {y} is {comm}"));
            }
            if c.status == CheckStatus::Fail {
                return c;
            }
        }
    }
    let expected = group_order(family, SubgroupName::Unipotent, md);
    c.detail = Some(format!("kernel size {kernel}, unipotent order {expected}"));
    if kernel as u128 != expected {
        c.fail(format!("kernel size {kernel} != {expected}"));
    }
    c
}

fn closure_name(literal: bool) -> &'static str {
    if literal {
        "unipotent_prime_closure"
    } else {
        "unipotent_prime_closure_on_borel"
    }
}

/// For every `u` in U' and every `m` in the set (or in set ∩ Borel when
/// `literal` is false), `u m` is in the set. Exhaustive; GL2 and fiber pairs
/// only. Stops at the first counterexample.
pub fn check_closure_exhaustive(id: ConjSetId, ell: u64, literal: bool) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new(closure_name(literal), id.family(), id, ell);
    let uprime = subgroup_elements(id.family(), SubgroupName::UnipotentPrime, md);
    let test = |m: &GroupElement, c: &mut GroupCheck| -> bool {
        for u in &uprime {
            c.checked += 1;
            let um = u.mul(m).expect("same group");
            if !in_conj_set(&um, id) {
                c.fail(format!("u = {u}, m = {m}, u m = {um} has characteristic polynomial {:?}", um.char_poly()));
                return false;
            }
        }
        true
    };
    let borel_members = |family| -> Vec<GroupElement> {
        subgroup_elements(family, SubgroupName::Borel, md).into_iter().filter(|g| in_conj_set(g, id)).collect()
    };
    match (id.family(), literal) {
        (Family::GL2QM, true) => {
            for m in gl2_conj_set(id, md) {
                if !test(&m, &mut c) {
                    break;
                }
            }
        }
        (Family::Fiber, true) => {
            fiber_conj_set_visit(id, md, |m| test(m, &mut c));
        }
        (Family::GSp4, _) => panic!("GSp4 closure is checked by sampling"),
        (family, false) => {
            for m in borel_members(family) {
                if !test(&m, &mut c) {
                    break;
                }
            }
        }
    }
    c
}

/// Random pairs `(u, m)` with `u` in U' and `m` in the set (or set ∩ Borel).
pub fn check_closure_sampled(id: ConjSetId, ell: u64, samples: u64, seed: u64, literal: bool) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new(closure_name(literal), id.family(), id, ell);
    let reps = matching_torus_representatives(id, md);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0u64;
    for _ in 0..samples {
        let m = if literal { random_conj(id, &reps, md, &mut rng) } else { random_conj_borel(id, &reps, md, &mut rng) };
        let u = random_subgroup_element(id.family(), SubgroupName::UnipotentPrime, md, &mut rng);
        c.checked += 1;
        let um = u.mul(&m).expect("same group");
        if !in_conj_set(&um, id) {
            failures += 1;
            c.fail(format!("u = {u}, m = {m}, u m has characteristic polynomial {:?}", um.char_poly()));
        }
    }
    c.detail = Some(format!("{failures} failures in {samples} samples (seed {seed})"));
    c
}

fn borel_conjugation_test(m: &GroupElement, c: &mut GroupCheck) -> bool {
    c.checked += 1;
    match conjugate_into_borel(m) {
        Ok((g, b)) => {
            let ok = is_member(&b, SubgroupName::Borel) && m.conjugate_by(&g).ok() == Some(b);
            if !ok {
                c.fail(format!("m = {m}: g = {g}, b = {b} fails g^-1 m g = b in Borel"));
            }
            ok
        }
        Err(e) => {
            c.fail(format!("m = {m}: {e}"));
            false
        }
    }
}

/// Every element of the set is conjugated into Borel. Exhaustive.
pub fn check_borel_conjugation_exhaustive(id: ConjSetId, ell: u64) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new("borel_conjugation", id.family(), id, ell);
    match id.family() {
        Family::GL2QM => {
            for m in gl2_conj_set(id, md) {
                if !borel_conjugation_test(&m, &mut c) {
                    break;
                }
            }
        }
        Family::Fiber => {
            fiber_conj_set_visit(id, md, |m| borel_conjugation_test(m, &mut c));
        }
        Family::GSp4 => {
            let mut ok = true;
            gsp4_block_scan_visit(md, |m, _| {
                if !ok {
                    return;
                }
                let g = GroupElement::from_gsp4(*m, md).expect("symplectic");
                if in_conj_set(&g, id) {
                    ok = borel_conjugation_test(&g, &mut c);
                }
            });
        }
    }
    c
}

pub fn check_borel_conjugation_sampled(id: ConjSetId, ell: u64, samples: u64, seed: u64) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new("borel_conjugation", id.family(), id, ell);
    let reps = matching_torus_representatives(id, md);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let m = random_conj(id, &reps, md, &mut rng);
        if !borel_conjugation_test(&m, &mut c) {
            break;
        }
    }
    c.detail = Some(format!("{samples} samples (seed {seed})"));
    c
}

pub fn check_witness(id: ConjSetId, ell: u64) -> GroupCheck {
    let md = modulus(ell);
    let mut c = GroupCheck::new("witness", id.family(), id, ell);
    c.checked = 1;
    match witness(id, md) {
        Ok(w) if in_conj_set(&w, id) => c.detail = Some(w.to_string()),
        Ok(w) => c.fail(format!("witness {w} is not in the set")),
        Err(e) => c.fail(e.to_string()),
    }
    c
}

/// Primes in `[3, max]` at which the witness construction applies.
pub fn admissible_ells(id: ConjSetId, max: u64) -> Vec<u64> {
    (3..=max).filter(|&l| is_prime(l) && witness_available(id, modulus(l))).collect()
}

/// `quotient_image_size` is at most `bound` and the same at every given ell.
pub fn check_quotient_bounded(id: ConjSetId, ells: &[u64], bound: u64) -> GroupCheck {
    let mut c = GroupCheck::new("quotient_image_bounded", id.family(), id, ells.last().copied().unwrap_or(0));
    let sizes: Vec<(u64, u64)> = ells
        .iter()
        .map(|&l| (l, quotient_image_size(id, modulus(l)).expect("admissible ell")))
        .collect();
    c.checked = sizes.len() as u64;
    let distinct: BTreeSet<u64> = sizes.iter().map(|&(_, s)| s).collect();
    let max = distinct.iter().max().copied().unwrap_or(0);
    c.detail = Some(format!("sizes {distinct:?} over {} primes up to {}", sizes.len(), c.ell));
    if max > bound {
        let (l, s) = sizes.iter().find(|&&(_, s)| s > bound).expect("max exceeds bound");
        c.fail(format!("size {s} at ell = {l} exceeds {bound}"));
    } else if distinct.len() > 1 {
        c.fail(format!("sizes vary with ell: {sizes:?}"));
    }
    c
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Largest ell for witness and quotient-size checks.
    pub max_ell: u64,
    /// Largest ell for exhaustive closure and conjugation checks.
    pub exhaustive_max_ell: u64,
    /// ell for sampled GSp4 checks.
    pub sample_ell: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_ell: 200, exhaustive_max_ell: 13, sample_ell: 73, samples: 10_000, seed: 0x5eed }
    }
}

/// The full battery: orders, normality, B/U, closure, Borel conjugation,
/// witnesses and bounded quotient images.
pub fn verify_groups(opts: &VerifyOptions) -> Vec<GroupCheck> {
    let mut out = Vec::new();
    for ell in [5u64, 7] {
        for sub in SubgroupName::ALL {
            out.push(check_order(Family::GL2QM, sub, ell));
        }
    }
    for sub in SubgroupName::ALL {
        out.push(check_order(Family::Fiber, sub, 5));
    }
    out.extend(check_orders_block_scan(3));
    for (family, ell) in [(Family::GL2QM, 5u64), (Family::Fiber, 5), (Family::GSp4, 3)] {
        out.extend(check_normality(family, ell));
        out.push(check_quotient_abelian(family, ell));
    }
    for id in ConjSetId::all() {
        let small = admissible_ells(id, opts.exhaustive_max_ell);
        match id.family() {
            Family::GSp4 => {
                if witness_available(id, modulus(opts.sample_ell)) {
                    for literal in [true, false] {
                        out.push(check_closure_sampled(id, opts.sample_ell, opts.samples, opts.seed, literal));
                    }
                    out.push(check_borel_conjugation_sampled(id, opts.sample_ell, opts.samples.min(1000), opts.seed));
                }
                if witness_available(id, modulus(3)) {
                    out.push(check_borel_conjugation_exhaustive(id, 3));
                }
            }
            _ => {
                for &ell in &small {
                    for literal in [true, false] {
                        out.push(check_closure_exhaustive(id, ell, literal));
                    }
                    if id.family() == Family::GL2QM || ell <= 7 {
                        out.push(check_borel_conjugation_exhaustive(id, ell));
                    } else {
                        out.push(check_borel_conjugation_sampled(id, ell, opts.samples.min(1000), opts.seed));
                    }
                }
            }
        }
        let ells = admissible_ells(id, opts.max_ell);
        for &ell in &ells {
            out.push(check_witness(id, ell));
        }
        out.push(check_quotient_bounded(id, &ells, 8));
    }
    out
}
