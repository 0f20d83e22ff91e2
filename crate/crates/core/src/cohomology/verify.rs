//! Structural checks comparing both sides of known isomorphisms.
//!
//! Each check returns a [`Report`] with both sides' invariants. A pass where
//! both sides are trivial is reported as [`Status::VacuousPass`].

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::b0::{b0_from, fixed_classes, restriction_kernel, B0Options, RestrictionTarget};
use super::model::{check_cap, h1};
use super::H2Data;
use crate::group::{FiniteGroup, Semidirect, Subgroup};
use crate::linalg::factorize;
use crate::linalg::{kernel_dense, subquotient, FinAbGroup, ModSpan};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    VacuousPass,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub left: FinAbGroup,
    pub right: FinAbGroup,
    pub facts: BTreeMap<String, Value>,
}

impl Report {
    fn new(check: &str, left: FinAbGroup, right: FinAbGroup, extra_ok: bool) -> Self {
        let status = if left != right || !extra_ok {
            Status::Fail
        } else if left.is_trivial() {
            Status::VacuousPass
        } else {
            Status::Pass
        };
        Report { check: check.into(), status, left, right, facts: BTreeMap::new() }
    }

    fn fact(mut self, key: &str, v: impl Serialize) -> Self {
        self.facts.insert(key.into(), json!(v));
        self
    }
}

/// Whether the joint restriction to `targets` kills no nonzero class of
/// `module` modulo the relations.
fn injective_on(h2: &H2Data, module: &[Vec<u64>], targets: &[RestrictionTarget]) -> Result<bool> {
    let kernel = restriction_kernel(h2, module, targets);
    let rel = h2.relations();
    let mut u = kernel;
    u.extend(rel.iter().cloned());
    Ok(subquotient(&u, &rel, h2.modulus(), h2.model.dim())?.invariants.is_trivial())
}

fn targets(g: &FiniteGroup, subs: &[Subgroup], m: u64) -> Result<Vec<RestrictionTarget>> {
    subs.par_iter().map(|h| RestrictionTarget::new(g, h, m)).collect()
}

/// Unramified classes of a product against those of the factors.
pub fn verify_product(g1: &FiniteGroup, g2: &FiniteGroup, cap: usize) -> Result<Report> {
    let (g, left, right) = FiniteGroup::direct_product(g1, g2)?;
    check_cap(&g, cap)?;
    let m = g.order() as u64;
    let opts = B0Options { reduce: true, cap };
    let whole = b0_from(&g, H2Data::compute(&g, m)?, opts)?;
    let b1 = b0_from(g1, H2Data::compute(g1, m)?, opts)?;
    let b2 = b0_from(g2, H2Data::compute(g2, m)?, opts)?;

    // each representative restricts into the factor's unramified span
    let lands = |part: &Subgroup, factor: &super::B0Result| {
        let mut rows = factor.kernel.clone();
        rows.extend(factor.h2.relations());
        let span = ModSpan::from_rows(m, factor.h2.model.dim(), &rows);
        whole.representatives().iter().all(|(_, f)| {
            let e = &part.elements;
            span.contains(&factor.h2.model.gamma_with(|a, b| f.get2(e[a as usize], e[b as usize])))
        })
    };
    let realized = lands(&left, &b1) && lands(&right, &b2);
    let injective = injective_on(&whole.h2, &whole.kernel, &targets(&g, &[left, right], m)?)?;
    let lhs = whole.invariants().clone();
    let rhs = b1.invariants().direct_sum(b2.invariants());
    Ok(Report::new("product", lhs, rhs, realized && injective)
        .fact("order", g.order())
        .fact("h2_product", whole.h2.invariants())
        .fact("h2_factors", b1.h2.invariants().direct_sum(b2.h2.invariants()))
        .fact("restriction_lands_in_factors", realized)
        .fact("restriction_injective", injective))
}

fn check_coprime(sd: &Semidirect) -> Result<()> {
    let (a, b) = (sd.normal.order(), sd.complement.order());
    if a.gcd(&b) != 1 {
        return Err(Error::Input(format!("orders {a} and {b} of the factors are not coprime")));
    }
    Ok(())
}

/// Automorphisms of the normal factor induced by the complement's generators.
fn generator_actions(sd: &Semidirect, g0: &FiniteGroup) -> Vec<Vec<u32>> {
    g0.generators().iter().map(|&s| sd.action[s as usize].clone()).collect()
}

/// Homomorphisms `N → Z/m` fixed by the given automorphisms.
fn fixed_homs(n: &FiniteGroup, m: u64, autos: &[Vec<u32>]) -> Result<FinAbGroup> {
    let h2 = super::GaugeModel::new(n, m)?;
    let homs = h2.hom_generators();
    let k = n.generators().len();
    if homs.is_empty() || k == 0 {
        return Ok(FinAbGroup::trivial());
    }
    let values: Vec<Vec<u64>> = homs.iter().map(|c| h2.character_values(c)).collect();
    let mut rows = Vec::new();
    for sigma in autos {
        for &s in n.generators() {
            let r: Vec<u64> = values.iter().map(|v| (v[sigma[s as usize] as usize] + m - v[s as usize]) % m).collect();
            if r.iter().any(|&x| x != 0) {
                rows.push(r);
            }
        }
    }
    let fixed: Vec<Vec<u64>> = if rows.is_empty() {
        homs
    } else {
        kernel_dense(m, homs.len(), &rows)
            .iter()
            .map(|t| (0..k).map(|j| t.iter().zip(&homs).fold(0, |s, (c, h)| (s + c * h[j]) % m)).collect())
            .collect()
    };
    Ok(subquotient(&fixed, &[], m, k)?.invariants)
}

/// Degree `q ∈ {1, 2}` cohomology of `N ⋊ G0` with `gcd(|N|, |G0|) = 1`
/// against invariants of `N` times cohomology of `G0`.
pub fn verify_coprime_semidirect(
    n: &FiniteGroup,
    g0: &FiniteGroup,
    sd: &Semidirect,
    q: u8,
    cap: usize,
) -> Result<Report> {
    check_coprime(sd)?;
    let g = &sd.group;
    check_cap(g, cap)?;
    let m = g.order().max(2) as u64;
    let autos = generator_actions(sd, g0);
    match q {
        1 => {
            let lhs = h1(g, m);
            let fixed = fixed_homs(n, m, &autos)?;
            let rhs = fixed.direct_sum(&h1(g0, m));
            // a homomorphism vanishing on every cyclic subgroup is zero
            Ok(Report::new("coprime-semidirect", lhs, rhs, true)
                .fact("degree", 1)
                .fact("fixed_part", fixed)
                .fact("unramified_both_sides_trivial", true))
        }
        2 => {
            let opts = B0Options { reduce: true, cap };
            let hg = H2Data::compute(g, m)?;
            let injective =
                injective_on(&hg, &hg.cocycles, &targets(g, &[sd.normal.clone(), sd.complement.clone()], m)?)?;
            let whole = b0_from(g, hg, opts)?;
            let bn = b0_from(n, H2Data::compute(n, m)?, opts)?;
            let bc = b0_from(g0, H2Data::compute(g0, m)?, opts)?;
            let fixed_h2 = fixed_classes(&bn.h2, &bn.h2.cocycles, &autos)?.invariants;
            let fixed_b0 = fixed_classes(&bn.h2, &bn.kernel, &autos)?.invariants;
            let lhs = whole.h2.invariants().clone();
            let rhs = fixed_h2.direct_sum(bc.h2.invariants());
            let b0_lhs = whole.invariants().clone();
            let b0_rhs = fixed_b0.direct_sum(bc.invariants());
            let b0_ok = b0_lhs == b0_rhs;
            Ok(Report::new("coprime-semidirect", lhs, rhs, injective && b0_ok)
                .fact("degree", 2)
                .fact("fixed_part", fixed_h2)
                .fact("restriction_injective", injective)
                .fact("unramified_left", b0_lhs)
                .fact("unramified_right", b0_rhs)
                .fact("unramified_equal", b0_ok))
        }
        _ => Err(Error::Input(format!("degree {q} is not supported (use 1 or 2)"))),
    }
}

/// Unramified classes of a Frobenius group against the invariant
/// unramified classes of its kernel.
pub fn verify_frobenius(n: &FiniteGroup, g0: &FiniteGroup, sd: &Semidirect, cap: usize) -> Result<Report> {
    for (gi, phi) in sd.action.iter().enumerate().skip(1) {
        if let Some(s) = (1..phi.len()).find(|&s| phi[s] as usize == s) {
            return Err(Error::Input(format!(
                "action is not fixed-point-free: complement element {gi} fixes kernel element {s}"
            )));
        }
    }
    let g = &sd.group;
    check_cap(g, cap)?;
    let m = g.order().max(2) as u64;
    let opts = B0Options { reduce: true, cap };
    let whole = b0_from(g, H2Data::compute(g, m)?, opts)?;
    let bn = b0_from(n, H2Data::compute(n, m)?, opts)?;
    let bc = b0_from(g0, H2Data::compute(g0, m)?, opts)?;
    let fixed = fixed_classes(&bn.h2, &bn.kernel, &generator_actions(sd, g0))?.invariants;
    Ok(Report::new("frobenius", whole.invariants().clone(), fixed, true)
        .fact("order", g.order())
        .fact("kernel_unramified", bn.invariants())
        .fact("complement_unramified", bc.invariants()))
}

/// Joint restriction of `H²(G, Q/Z)` to subgroups whose indices have no
/// common factor.
pub fn verify_coprime_injectivity(g: &FiniteGroup, subs: &[Subgroup], cap: usize) -> Result<Report> {
    check_cap(g, cap)?;
    let n = g.order();
    let gcd = subs.iter().fold(0usize, |acc, h| acc.gcd(&(n / h.order())));
    if gcd != 1 {
        return Err(Error::Input(format!("indices of the given subgroups share the factor {gcd}")));
    }
    let m = n.max(2) as u64;
    let h2 = H2Data::compute(g, m)?;
    let injective = injective_on(&h2, &h2.cocycles, &targets(g, subs, m)?)?;
    let inv = h2.invariants().clone();
    let kernel = if injective { FinAbGroup::trivial() } else { inv.clone() };
    let mut r = Report::new("coprime-injectivity", kernel, FinAbGroup::trivial(), injective)
        .fact("h2", &inv)
        .fact("subgroup_orders", subs.iter().map(Subgroup::order).collect::<Vec<_>>())
        .fact("injective", injective);
    if injective && !inv.is_trivial() {
        r.status = Status::Pass;
    }
    Ok(r)
}

/// Coprime injectivity for the family of Sylow subgroups.
pub fn verify_sylow_injectivity(g: &FiniteGroup, cap: usize) -> Result<Report> {
    let subs: Vec<Subgroup> = if g.order() == 1 {
        vec![g.whole()]
    } else {
        factorize(g.order() as u64).into_iter().map(|(p, _)| g.sylow_subgroup(p)).collect()
    };
    let mut r = verify_coprime_injectivity(g, &subs, cap)?;
    r.check = "sylow-injectivity".into();
    Ok(r)
}

/// Checks that restriction to `h` followed by transfer back multiplies
/// every class of `H²(G, Z/m)` by the index.
pub fn corestriction_check(g: &FiniteGroup, h: &Subgroup) -> Result<bool> {
    let m = g.order().max(2) as u64;
    let h2 = H2Data::compute(g, m)?;
    let index = (g.order() / h.order()) as u64;
    for y in &h2.cocycles {
        let f = h2.model.phi(y);
        let back = f.restrict(g, h)?.corestrict(g, h)?;
        if !back.is_cocycle(g)? || !h2.is_zero_in_zm(&back.sub(&f.scale(index))) {
            return Ok(false);
        }
    }
    Ok(true)
}
