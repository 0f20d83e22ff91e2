//! Tate cohomology in degrees −1 and 0, and `H¹` via crossed homomorphisms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::{GLattice, Mat};
use crate::group::Subgroup;
use crate::linalg::{int_kernel, lattice_quotient, FinAbGroup, IntMatrix};
use crate::{Error, Result};

/// Cap on `|H|·rank` for the crossed-homomorphism computation.
pub const DEFAULT_H1_CAP: usize = 4096;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn columns(m: &Mat) -> Vec<Vec<i64>> {
    let r = m.len();
    let c = m.first().map_or(0, Vec::len);
    (0..c).map(|j| (0..r).map(|i| m[i][j]).collect()).collect()
}

fn minus_identity(m: &Mat) -> Mat {
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= 1;
    }
    out
}

fn generators_of(h: &Subgroup) -> Vec<u32> {
    if h.generators.is_empty() {
        h.elements.iter().copied().filter(|&x| x != 0).collect()
    } else {
        h.generators.clone()
    }
}

fn norm(m: &GLattice, h: &Subgroup) -> Mat {
    let r = m.rank();
    let mut out = vec![vec![0i64; r]; r];
    for &g in &h.elements {
        for (o, row) in out.iter_mut().zip(m.matrix(g)) {
            for (x, y) in o.iter_mut().zip(row) {
                *x += y;
            }
        }
    }
    out
}

fn kernel_basis(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    let uniq: BTreeSet<&Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let dense: Vec<Vec<i64>> = uniq.into_iter().cloned().collect();
    int_kernel(&IntMatrix::from_dense(&dense, ncols))
}

/// `ker N_H / I_H·M`.
pub fn tate_minus1(m: &GLattice, h: &Subgroup) -> Result<FinAbGroup> {
    let r = m.rank();
    if r == 0 {
        return Ok(FinAbGroup::trivial());
    }
    let kernel = kernel_basis(&norm(m, h), r);
    let aug: Vec<Vec<BigInt>> =
        generators_of(h).iter().flat_map(|&s| columns(&minus_identity(m.matrix(s)))).map(|c| big(&c)).collect();
    lattice_quotient(&kernel, &aug)
}

/// `M^H / N_H·M`.
pub fn tate_zero(m: &GLattice, h: &Subgroup) -> Result<FinAbGroup> {
    let r = m.rank();
    if r == 0 {
        return Ok(FinAbGroup::trivial());
    }
    let rows: Vec<Vec<i64>> = generators_of(h).iter().flat_map(|&s| minus_identity(m.matrix(s))).collect();
    let fixed = kernel_basis(&rows, r);
    let norms: Vec<Vec<BigInt>> = columns(&norm(m, h)).iter().map(|c| big(c)).collect();
    lattice_quotient(&fixed, &norms)
}

/// Crossed homomorphisms modulo principal ones. A crossed homomorphism is
/// fixed by its values on the generators of a spanning tree of `H`; the
/// remaining Cayley edges give the linear constraints.
pub fn h1_lattice(m: &GLattice, h: &Subgroup, cap: usize) -> Result<FinAbGroup> {
    let r = m.rank();
    if h.order() * r > cap {
        return Err(Error::SizeCap(format!("|H|·rank = {} exceeds {cap}", h.order() * r)));
    }
    if r == 0 || h.order() == 1 {
        return Ok(FinAbGroup::trivial());
    }
    let local = h.to_group(m.group());
    let tree = local.spanning_tree();
    let ngens = tree.gens.len();
    let k = ngens * r;
    let rho = |x: u32| m.matrix(h.elements[x as usize]);
    // coefficients of f(b) in terms of the generator values
    let mut coef: Vec<Mat> = vec![Vec::new(); local.order()];
    coef[0] = vec![vec![0i64; k]; r];
    let block = |s: usize, a: &Mat| -> Mat {
        let mut out = vec![vec![0i64; k]; r];
        for i in 0..r {
            out[i][s * r..(s + 1) * r].copy_from_slice(&a[i]);
        }
        out
    };
    for &b in tree.bfs.iter().skip(1) {
        let parent = tree.parent[b as usize];
        let s = tree.via[b as usize] as usize;
        let step = block(s, rho(parent));
        coef[b as usize] = coef[parent as usize]
            .iter()
            .zip(&step)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
            .collect();
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for b in local.elements() {
        for (s, &g) in tree.gens.iter().enumerate() {
            let bs = local.mul(b, g);
            let step = block(s, rho(b));
            for i in 0..r {
                let row: Vec<i64> =
                    (0..k).map(|c| coef[bs as usize][i][c] - coef[b as usize][i][c] - step[i][c]).collect();
                rows.push(row);
            }
        }
    }
    let cocycles = kernel_basis(&rows, k);
    let principal: Vec<Vec<BigInt>> = (0..r)
        .map(|c| {
            let mut v = vec![0i64; k];
            for (s, &g) in tree.gens.iter().enumerate() {
                let a = minus_identity(rho(g));
                for i in 0..r {
                    v[s * r + i] = a[i][c];
                }
            }
            big(&v)
        })
        .collect();
    lattice_quotient(&cocycles, &principal)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupTate {
    pub order: usize,
    pub generators: Vec<u32>,
    pub tate_minus1: FinAbGroup,
    pub tate_zero: FinAbGroup,
    pub h1: FinAbGroup,
}

impl SubgroupTate {
    fn compute(m: &GLattice, h: &Subgroup, cap: usize) -> Result<Self> {
        Ok(SubgroupTate {
            order: h.order(),
            generators: h.generators.clone(),
            tate_minus1: tate_minus1(m, h)?,
            tate_zero: tate_zero(m, h)?,
            h1: h1_lattice(m, h, cap)?,
        })
    }

    fn same_groups(&self, other: &SubgroupTate) -> bool {
        self.tate_minus1 == other.tate_minus1 && self.tate_zero == other.tate_zero && self.h1 == other.h1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TateReport {
    pub rank: usize,
    pub group_order: usize,
    pub subgroups: Vec<SubgroupTate>,
    pub is_flabby: bool,
    pub is_coflabby: bool,
    /// All three degrees vanish on every subgroup (necessary for
    /// projectivity, not sufficient).
    pub coh_trivial_evidence: bool,
    /// Conjugate subgroups recomputed to confirm invariance.
    pub conjugates_checked: usize,
}

/// Tate groups on one subgroup per conjugacy class, with one conjugate per
/// class recomputed as a consistency check.
pub fn flabby_report(m: &GLattice, group_cap: usize) -> Result<TateReport> {
    let g = m.group();
    if g.order() > group_cap {
        return Err(Error::SizeCap(format!("acting group of order {} exceeds {group_cap}", g.order())));
    }
    let reps = g.subgroup_class_representatives();
    let subgroups: Vec<SubgroupTate> =
        reps.par_iter().map(|h| SubgroupTate::compute(m, h, DEFAULT_H1_CAP)).collect::<Result<_>>()?;
    let checked: Vec<bool> = reps
        .par_iter()
        .zip(&subgroups)
        .map(|(h, t)| {
            let other = g.elements().map(|x| g.conjugate_subgroup(x, h)).find(|c| c.elements != h.elements);
            match other {
                None => Ok(false),
                Some(c) => {
                    let tc = SubgroupTate::compute(m, &c, DEFAULT_H1_CAP)?;
                    if !tc.same_groups(t) {
                        return Err(Error::Internal("Tate groups differ on conjugate subgroups".into()));
                    }
                    Ok(true)
                }
            }
        })
        .collect::<Result<_>>()?;
    let is_flabby = subgroups.iter().all(|s| s.tate_minus1.is_trivial());
    let is_coflabby = subgroups.iter().all(|s| s.h1.is_trivial());
    let coh_trivial_evidence = is_flabby && is_coflabby && subgroups.iter().all(|s| s.tate_zero.is_trivial());
    Ok(TateReport {
        rank: m.rank(),
        group_order: g.order(),
        subgroups,
        is_flabby,
        is_coflabby,
        coh_trivial_evidence,
        conjugates_checked: checked.into_iter().filter(|&c| c).count(),
    })
}

/// Integer matrix entries as `i64`, for kernels that stay small.
pub(crate) fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Internal("lattice entry exceeds 64 bits".into()))).collect()
}
