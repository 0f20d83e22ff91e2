//! Gauge-fixed description of normalized 2-cocycles.
//!
//! Fix a breadth-first spanning tree of the Cayley graph. Every normalized
//! cocycle is cohomologous to a unique one vanishing on tree edges
//! `(g, s)`, and such a cocycle is determined by its values on the
//! non-tree edges `(g, s)` with `s` a generator. The map `Φ` rebuilds the
//! full cochain from edge values and `Γ` projects any cocycle onto its gauge
//! representative, with `Γ∘Φ = id` and `f − Φ(Γ f)` a coboundary.
//!
//! A vector of edge values comes from a cocycle exactly when the cocycle
//! identity holds at `(s, h, t)` for generators `s, t`: the identity at a
//! general first argument follows from these by induction along words. This
//! keeps the linear systems at `|S|·u` rows instead of `|G|³`.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::Cochain;
use crate::group::{FiniteGroup, SpanningTree};
use crate::linalg::{
    kernel_dense, kernel_mod, kernel_rows, solve_mod, subquotient, FinAbGroup, IntMatrix, ModSpan, Subquotient,
};
use crate::{Error, Result};

const NONE: u32 = u32::MAX;

/// Default cap on the group order for the cochain engine.
pub const DEFAULT_ENGINE_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct GaugeModel {
    group: FiniteGroup,
    modulus: u64,
    tree: SpanningTree,
    edge_id: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl GaugeModel {
    pub fn new(group: &FiniteGroup, modulus: u64) -> Result<Self> {
        if !modulus.is_multiple_of(group.order() as u64) && group.order() > 1 {
            return Err(Error::Input(format!(
                "modulus {modulus} is not a multiple of the group order {}",
                group.order()
            )));
        }
        let tree = group.spanning_tree();
        let k = tree.gens.len();
        let n = group.order();
        let mut edge_id = vec![NONE; n * k];
        let mut edges = Vec::new();
        for g in 0..n as u32 {
            for (si, &s) in tree.gens.iter().enumerate() {
                if !tree.is_tree_edge(g, si, group.mul(g, s)) {
                    edge_id[g as usize * k + si] = edges.len() as u32;
                    edges.push((g, si as u32));
                }
            }
        }
        Ok(GaugeModel { group: group.clone(), modulus, tree, edge_id, edges })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of edge unknowns.
    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    #[inline]
    fn edge(&self, g: u32, si: u32) -> u32 {
        self.edge_id[g as usize * self.tree.gens.len() + si as usize]
    }

    /// The full normalized cochain with the given edge values.
    pub fn phi(&self, y: &[u64]) -> Cochain {
        let n = self.group.order();
        let m = self.modulus;
        let mut out = Cochain::zero(n, 2, m);
        if n == 1 {
            return out;
        }
        let stride = n - 1;
        for g in 1..n as u32 {
            let base = (g as usize - 1) * stride;
            for &h in self.tree.bfs.iter().skip(1) {
                let p = self.tree.parent[h as usize];
                let prev = if p == 0 { 0 } else { out.values[base + p as usize - 1] };
                let e = self.edge(self.group.mul(g, p), self.tree.via[h as usize]);
                let add = if e == NONE { 0 } else { y[e as usize] };
                out.values[base + h as usize - 1] = (prev + add) % m;
            }
        }
        out
    }

    /// Gauge projection of a cocycle given by its values.
    pub fn gamma_with(&self, f: impl Fn(u32, u32) -> u64) -> Vec<u64> {
        let m = self.modulus;
        let n = self.group.order();
        let val = |a: u32, b: u32| if a == 0 || b == 0 { 0 } else { f(a, b) % m };
        let mut pot = vec![0u64; n];
        for &x in self.tree.bfs.iter().skip(1) {
            let p = self.tree.parent[x as usize];
            let s = self.tree.gens[self.tree.via[x as usize] as usize];
            pot[x as usize] = (pot[p as usize] + val(p, s)) % m;
        }
        self.edges
            .iter()
            .map(|&(h, si)| {
                let s = self.tree.gens[si as usize];
                let hs = self.group.mul(h, s);
                (val(h, s) + pot[h as usize] + m - pot[hs as usize]) % m
            })
            .collect()
    }

    pub fn gamma(&self, c: &Cochain) -> Vec<u64> {
        assert_eq!(c.order, self.group.order(), "cochain lives on another group");
        let scale = self.modulus / c.modulus;
        assert_eq!(scale * c.modulus, self.modulus, "cochain modulus must divide the model modulus");
        self.gamma_with(|a, b| c.get2(a, b) * scale)
    }

    /// Sparse form of `f(x, k)` as a combination of edge unknowns.
    fn push_form(&self, x: u32, k: u32, sign: i64, out: &mut Vec<(usize, i64)>) {
        let mut c = k;
        while c != 0 {
            let p = self.tree.parent[c as usize];
            let e = self.edge(self.group.mul(x, p), self.tree.via[c as usize]);
            if e != NONE {
                out.push((e as usize, sign));
            }
            c = p;
        }
    }

    /// Linear conditions on edge values cutting out the cocycles.
    pub fn constraint_rows(&self) -> Vec<Vec<(usize, i64)>> {
        let mut rows = Vec::with_capacity(self.tree.gens.len() * self.edges.len());
        for &s in &self.tree.gens {
            for (ei, &(h, ti)) in self.edges.iter().enumerate() {
                let t = self.tree.gens[ti as usize];
                let mut row = Vec::new();
                self.push_form(s, h, 1, &mut row);
                let sh = self.group.mul(s, h);
                let e = self.edge(sh, ti);
                if e != NONE {
                    row.push((e as usize, 1));
                }
                self.push_form(s, self.group.mul(h, t), -1, &mut row);
                row.push((ei, -1));
                let mut r = IntMatrix::zeros(0, self.edges.len());
                r.push_row_sparse(&row);
                if !r.row(0).is_empty() {
                    rows.push(r.row(0).to_vec());
                }
            }
        }
        rows
    }

    /// Generators of `Hom(G, Z/m)` as value vectors on the generating set.
    pub fn hom_generators(&self) -> Vec<Vec<u64>> {
        let k = self.tree.gens.len();
        if k == 0 {
            return Vec::new();
        }
        let rows = self.group.abelian_relations();
        let a = IntMatrix::from_dense(&rows, k);
        let mut mm = IntMatrix::zeros_mod(0, k, self.modulus);
        for r in 0..a.rows() {
            mm.push_row_sparse(a.row(r));
        }
        kernel_mod(&mm)
    }

    /// Values `χ(x)` of the homomorphism with generator values `c`.
    pub fn character_values(&self, c: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0u64; self.group.order()];
        for &x in self.tree.bfs.iter().skip(1) {
            let p = self.tree.parent[x as usize] as usize;
            out[x as usize] = (out[p] + c[self.tree.via[x as usize] as usize]) % m;
        }
        out
    }

    /// Gauge images of the coboundaries `δ[x]`, `x ≠ 1`.
    pub fn coboundary_generators(&self) -> Vec<Vec<u64>> {
        let m = self.modulus;
        let g = &self.group;
        let mut out: Vec<Vec<u64>> = (1..g.order() as u32)
            .into_par_iter()
            .map(|x| {
                let ind = |a: u32| u64::from(a == x);
                self.gamma_with(|a, b| ind(a) + ind(b) + m - ind(g.mul(a, b)))
            })
            .filter(|v| v.iter().any(|&e| e != 0))
            .collect();
        out.dedup();
        out
    }

    /// Gauge images of the carry cocycles of the given homomorphisms.
    pub fn bockstein_generators(&self, homs: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let m = self.modulus;
        homs.iter()
            .map(|c| {
                let chi = self.character_values(c);
                self.gamma_with(|a, b| u64::from(chi[a as usize] + chi[b as usize] >= m))
            })
            .filter(|v| v.iter().any(|&e| e != 0))
            .collect()
    }
}

/// Cocycles, coboundaries and the Schur multiplier of one group at a fixed
/// modulus (a multiple of the group order).
#[derive(Debug)]
pub struct H2Data {
    pub model: GaugeModel,
    /// Generators of the gauge cocycles.
    pub cocycles: Vec<Vec<u64>>,
    /// Generators of the gauge coboundaries.
    pub coboundaries: Vec<Vec<u64>>,
    /// Generators of the gauge carry cocycles.
    pub bockstein: Vec<Vec<u64>>,
    /// Generators of `Hom(G, Z/m)` as values on the generating set.
    pub hom: Vec<Vec<u64>>,
    pub hom_invariants: FinAbGroup,
    /// `H²(G, Z/m)`.
    pub h2_zm: FinAbGroup,
    /// `H²(G, Q/Z)` with explicit generators in edge coordinates.
    pub quotient: Subquotient,
    relation_span: ModSpan,
    coboundary_span: ModSpan,
    annihilator: OnceLock<Vec<Vec<u64>>>,
}

impl H2Data {
    /// Computes everything for `group` at modulus `modulus`.
    pub fn compute(group: &FiniteGroup, modulus: u64) -> Result<Self> {
        let model = GaugeModel::new(group, modulus)?;
        let u = model.dim();
        let rows = model.constraint_rows();
        let row_refs: Vec<&[(usize, i64)]> = rows.iter().map(Vec::as_slice).collect();
        let cocycles = if u == 0 { Vec::new() } else { kernel_rows(modulus, u, &row_refs) };
        let coboundaries = model.coboundary_generators();
        let hom = model.hom_generators();
        let bockstein = model.bockstein_generators(&hom);
        let k = model.tree().gens.len();
        let hom_invariants = subquotient(&hom, &[], modulus, k.max(1)).map(|s| s.invariants).unwrap_or_default();
        let h2_zm = subquotient(&cocycles, &coboundaries, modulus, u)?.invariants;
        let mut relations = coboundaries.clone();
        relations.extend(bockstein.iter().cloned());
        let quotient = subquotient(&cocycles, &relations, modulus, u)?;
        let ord = |g: &FinAbGroup| g.order().unwrap_or(0);
        if ord(&h2_zm) != ord(&hom_invariants) * ord(&quotient.invariants) {
            return Err(Error::Internal(format!(
                "order identity failed: |H2(Z/m)| = {}, |Hom| = {}, |H2(Q/Z)| = {}",
                h2_zm, hom_invariants, quotient.invariants
            )));
        }
        let relation_span = ModSpan::from_rows(modulus, u, &relations);
        let coboundary_span = ModSpan::from_rows(modulus, u, &coboundaries);
        Ok(H2Data {
            model,
            cocycles,
            coboundaries,
            bockstein,
            hom,
            hom_invariants,
            h2_zm,
            quotient,
            relation_span,
            coboundary_span,
            annihilator: OnceLock::new(),
        })
    }

    /// `H²(G, Q/Z)` at the default modulus `|G|`, respecting the engine cap.
    pub fn schur_multiplier(group: &FiniteGroup, cap: usize) -> Result<Self> {
        check_cap(group, cap)?;
        H2Data::compute(group, group.order().max(2) as u64)
    }

    pub fn modulus(&self) -> u64 {
        self.model.modulus()
    }

    pub fn invariants(&self) -> &FinAbGroup {
        &self.quotient.invariants
    }

    /// Generators of coboundaries plus carry cocycles.
    pub fn relations(&self) -> Vec<Vec<u64>> {
        let mut r = self.coboundaries.clone();
        r.extend(self.bockstein.iter().cloned());
        r
    }

    /// Annihilator of the relations: a vector of edge values lies in the
    /// relation span iff it pairs to zero with every row.
    pub fn annihilator(&self) -> &[Vec<u64>] {
        self.annihilator.get_or_init(|| {
            let rel = self.relations();
            if self.model.dim() == 0 {
                return Vec::new();
            }
            kernel_dense(self.modulus(), self.model.dim(), &rel)
        })
    }

    /// Whether a 2-cocycle represents zero in `H²(G, Q/Z)`.
    pub fn is_trivial_class(&self, c: &Cochain) -> bool {
        self.relation_span.contains(&self.model.gamma(c))
    }

    /// Whether a 2-cocycle represents zero in `H²(G, Z/m)`.
    pub fn is_zero_in_zm(&self, c: &Cochain) -> bool {
        self.coboundary_span.contains(&self.model.gamma(c))
    }

    /// Whether an edge vector lies in coboundaries plus carries.
    pub fn in_relations(&self, y: &[u64]) -> bool {
        self.relation_span.contains(y)
    }

    /// Cocycle for the given coordinates on the generators of
    /// `H²(G, Q/Z)` (one coordinate per elementary cyclic factor).
    pub fn lift(&self, coords: &[u64]) -> Cochain {
        let m = self.modulus();
        let mut y = vec![0u64; self.model.dim()];
        for (c, (_, g)) in coords.iter().zip(&self.quotient.generators) {
            for (a, b) in y.iter_mut().zip(g) {
                *a = (*a + c % m * b) % m;
            }
        }
        self.model.phi(&y)
    }

    /// Representative cocycles with their orders.
    pub fn representatives(&self) -> Vec<(u64, Cochain)> {
        self.quotient.generators.iter().map(|(o, g)| (*o, self.model.phi(g))).collect()
    }
}

pub(crate) fn check_cap(group: &FiniteGroup, cap: usize) -> Result<()> {
    if group.order() > cap {
        return Err(Error::SizeCap(format!("group of order {} exceeds the engine cap {cap}", group.order())));
    }
    Ok(())
}

/// `Hom(G, Z/m)` from the abelianization.
pub fn h1(group: &FiniteGroup, m: u64) -> FinAbGroup {
    let ab = group.abelianization();
    use num_integer::Integer;
    let orders = ab.invariant_factors.iter().map(|&d| d.gcd(&m)).chain(std::iter::repeat_n(m, ab.free_rank));
    FinAbGroup::from_cyclic_orders(orders)
}

/// Solves `δx = c` over normalized 1-cochains. Returns a witness when `c`
/// is a coboundary.
pub fn is_coboundary(group: &FiniteGroup, c: &Cochain) -> Result<Option<Cochain>> {
    if c.degree != 2 || c.order != group.order() {
        return Err(Error::Input("is_coboundary: expected a 2-cochain on the given group".into()));
    }
    if !c.is_cocycle(group)? {
        return Err(Error::Input("is_coboundary: input is not a cocycle".into()));
    }
    let n = group.order();
    if n == 1 {
        return Ok(Some(Cochain { degree: 1, order: 1, modulus: c.modulus, values: vec![] }));
    }
    let m = c.modulus;
    let mut a = IntMatrix::zeros_mod(0, n - 1, m);
    for g in 1..n as u32 {
        for h in 1..n as u32 {
            let gh = group.mul(g, h);
            let mut row = vec![(g as usize - 1, 1i64), (h as usize - 1, 1)];
            if gh != 0 {
                row.push((gh as usize - 1, -1));
            }
            a.push_row_sparse(&row);
        }
    }
    Ok(solve_mod(&a, &c.values).map(|x| Cochain { degree: 1, order: n, modulus: m, values: x }))
}
