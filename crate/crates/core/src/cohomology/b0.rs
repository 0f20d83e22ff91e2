//! Classes in `H²(G, Q/Z)` that die on every bicyclic subgroup.

use rayon::prelude::*;

use super::model::check_cap;
use super::{Cochain, GaugeModel, H2Data, DEFAULT_ENGINE_CAP};
use crate::group::{BicyclicOptions, FiniteGroup, Subgroup};
use crate::linalg::{kernel_dense, subquotient, FinAbGroup, Subquotient};
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct B0Options {
    /// Restrict only to maximal bicyclic subgroups, one per conjugacy class.
    pub reduce: bool,
    pub cap: usize,
}

impl Default for B0Options {
    fn default() -> Self {
        B0Options { reduce: true, cap: DEFAULT_ENGINE_CAP }
    }
}

/// A subgroup together with linear tests for triviality of restricted
/// classes in its `H²(·, Q/Z)`.
#[derive(Clone, Debug)]
pub struct RestrictionTarget {
    pub subgroup: Subgroup,
    model: GaugeModel,
    tests: Vec<Vec<u64>>,
}

impl RestrictionTarget {
    pub fn new(g: &FiniteGroup, h: &Subgroup, modulus: u64) -> Result<Self> {
        let local = h.to_group(g);
        let model = GaugeModel::new(&local, modulus)?;
        let tests = if model.dim() == 0 {
            Vec::new()
        } else {
            let mut rel = model.coboundary_generators();
            rel.extend(model.bockstein_generators(&model.hom_generators()));
            kernel_dense(modulus, model.dim(), &rel).into_iter().filter(|w| w.iter().any(|&x| x != 0)).collect()
        };
        Ok(RestrictionTarget { subgroup: h.clone(), model, tests })
    }

    /// Whether `H²` of the subgroup vanishes (no tests needed).
    pub fn is_vacuous(&self) -> bool {
        self.tests.is_empty()
    }

    /// Test values of the restriction of a cocycle on the ambient group;
    /// all zero iff the restricted class is trivial.
    pub fn conditions(&self, f: &Cochain) -> Vec<u64> {
        let m = self.model.modulus();
        let scale = m / f.modulus;
        let e = &self.subgroup.elements;
        let y = self.model.gamma_with(|a, b| f.get2(e[a as usize], e[b as usize]) * scale);
        self.tests.iter().map(|w| dot(w, &y, m)).collect()
    }

    pub fn is_trivial_restriction(&self, f: &Cochain) -> bool {
        self.conditions(f).iter().all(|&x| x == 0)
    }
}

fn dot(a: &[u64], b: &[u64], m: u64) -> u64 {
    a.iter().zip(b).fold(0u128, |s, (&x, &y)| (s + x as u128 * y as u128) % m as u128) as u64
}

/// Linear combinations `Σ t_i·module_i` for each row `t`.
fn combine(coeffs: &[Vec<u64>], module: &[Vec<u64>], m: u64, dim: usize) -> Vec<Vec<u64>> {
    coeffs
        .iter()
        .map(|t| {
            let mut out = vec![0u64; dim];
            for (c, v) in t.iter().zip(module) {
                if *c != 0 {
                    for (o, x) in out.iter_mut().zip(v) {
                        *o = (*o + c * x) % m;
                    }
                }
            }
            out
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect()
}

/// Cut `module` (gauge cocycles of `h2`) down to the elements whose
/// restrictions to every target are trivial.
pub fn restriction_kernel(h2: &H2Data, module: &[Vec<u64>], targets: &[RestrictionTarget]) -> Vec<Vec<u64>> {
    let m = h2.modulus();
    let cochains: Vec<Cochain> = module.par_iter().map(|y| h2.model.phi(y)).collect();
    let rows: Vec<Vec<u64>> = targets
        .par_iter()
        .filter(|t| !t.is_vacuous())
        .flat_map_iter(|t| {
            let conds: Vec<Vec<u64>> = cochains.iter().map(|f| t.conditions(f)).collect();
            (0..t.tests.len()).map(move |l| conds.iter().map(|c| c[l]).collect::<Vec<u64>>())
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    if rows.is_empty() {
        return module.to_vec();
    }
    let t = kernel_dense(m, module.len(), &rows);
    combine(&t, module, m, h2.model.dim())
}

/// Classes of `module` fixed (up to relations) by each element map in
/// `autos`, as a subquotient of `H²(·, Q/Z)`.
pub fn fixed_classes(h2: &H2Data, module: &[Vec<u64>], autos: &[Vec<u32>]) -> Result<Subquotient> {
    let m = h2.modulus();
    let dim = h2.model.dim();
    let rel = h2.relations();
    let ann = h2.annihilator();
    let cochains: Vec<Cochain> = module.par_iter().map(|y| h2.model.phi(y)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for sigma in autos {
        let conds: Vec<Vec<u64>> = cochains
            .par_iter()
            .zip(module)
            .map(|(f, y)| {
                let moved = h2.model.gamma(&f.compose(sigma));
                let diff: Vec<u64> = moved.iter().zip(y).map(|(a, b)| (a + m - b) % m).collect();
                ann.iter().map(|w| dot(w, &diff, m)).collect()
            })
            .collect();
        for l in 0..ann.len() {
            let r: Vec<u64> = conds.iter().map(|c| c[l]).collect();
            if r.iter().any(|&x| x != 0) {
                rows.push(r);
            }
        }
    }
    let fixed =
        if rows.is_empty() { module.to_vec() } else { combine(&kernel_dense(m, module.len(), &rows), module, m, dim) };
    let mut u = fixed;
    u.extend(rel.iter().cloned());
    subquotient(&u, &rel, m, dim)
}

/// The unramified classes with their bicyclic witnesses.
#[derive(Debug)]
pub struct B0Result {
    pub h2: H2Data,
    /// Bicyclic subgroups tested.
    pub classes: Vec<Subgroup>,
    /// Gauge cocycles spanning the preimage of the unramified classes.
    pub kernel: Vec<Vec<u64>>,
    pub quotient: Subquotient,
}

impl B0Result {
    pub fn invariants(&self) -> &FinAbGroup {
        &self.quotient.invariants
    }

    /// Representative cocycles, one per cyclic factor.
    pub fn representatives(&self) -> Vec<(u64, Cochain)> {
        self.quotient.generators.iter().map(|(o, y)| (*o, self.h2.model.phi(y))).collect()
    }
}

/// Unramified part at modulus `|G|`.
pub fn b0(g: &FiniteGroup, opts: B0Options) -> Result<B0Result> {
    b0_with_modulus(g, g.order().max(2) as u64, opts)
}

/// Unramified part computed at a chosen modulus (a multiple of `|G|`).
pub fn b0_with_modulus(g: &FiniteGroup, modulus: u64, opts: B0Options) -> Result<B0Result> {
    check_cap(g, opts.cap)?;
    b0_from(g, H2Data::compute(g, modulus)?, opts)
}

/// Unramified part from precomputed cohomology data of `g`.
pub fn b0_from(g: &FiniteGroup, h2: H2Data, opts: B0Options) -> Result<B0Result> {
    check_cap(g, opts.cap)?;
    let modulus = h2.modulus();
    let classes = g.bicyclic_subgroups(BicyclicOptions { reduce: opts.reduce });
    let kernel = if h2.invariants().is_trivial() {
        Vec::new()
    } else {
        let targets: Vec<RestrictionTarget> =
            classes.par_iter().map(|h| RestrictionTarget::new(g, h, modulus)).collect::<Result<_>>()?;
        restriction_kernel(&h2, &h2.cocycles, &targets)
    };
    let rel = h2.relations();
    let mut u = kernel.clone();
    u.extend(rel.iter().cloned());
    let quotient = subquotient(&u, &rel, modulus, h2.model.dim())?;
    Ok(B0Result { h2, classes, kernel, quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn abelian_and_small_groups_have_trivial_b0() {
        for g in [
            corpus::elementary_abelian(2, 3),
            corpus::dihedral(4),
            corpus::abelian(&[2, 4]),
            corpus::quaternion(8),
            corpus::alternating4(),
        ] {
            let r = b0(&g, B0Options::default()).unwrap();
            assert!(r.invariants().is_trivial(), "order {}", g.order());
        }
    }

    #[test]
    fn restriction_to_whole_group_detects_everything() {
        let g = corpus::elementary_abelian(2, 3);
        let h2 = H2Data::compute(&g, 8).unwrap();
        let t = RestrictionTarget::new(&g, &g.whole(), 8).unwrap();
        for (_, f) in h2.representatives() {
            assert!(!t.is_trivial_restriction(&f));
        }
        let k = restriction_kernel(&h2, &h2.cocycles, &[t]);
        let mut u = k;
        let rel = h2.relations();
        u.extend(rel.iter().cloned());
        assert!(subquotient(&u, &rel, 8, h2.model.dim()).unwrap().invariants.is_trivial());
    }

    #[test]
    fn swap_fixes_one_class_of_klein_four_squared() {
        // C2×C2 with the swap automorphism: H² = Z/2 is fixed
        let g = corpus::elementary_abelian(2, 2);
        let h2 = H2Data::compute(&g, 4).unwrap();
        let swap = vec![0, 2, 1, 3];
        let f = fixed_classes(&h2, &h2.cocycles, &[swap]).unwrap();
        assert_eq!(f.invariants.invariant_factors, vec![2]);
    }
}
