use std::collections::HashMap;

use super::{FiniteGroup, Subgroup, DEFAULT_ORDER_CAP};
use crate::{Error, Result};

/// `N ⋊ G0` with its distinguished subgroups.
#[derive(Clone, Debug)]
pub struct Semidirect {
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub complement: Subgroup,
    /// `action[g][σ] = g·σ·g⁻¹` for every element `g` of the acting group.
    pub action: Vec<Vec<u32>>,
}

/// A quotient group with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<u32>,
}

impl FiniteGroup {
    /// Closure of permutations of `{1..degree}` (one-line notation, 1-based).
    /// Products act left to right: `i^(xy) = (i^x)^y`. Elements are numbered
    /// breadth-first from the identity with generators in input order.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        let mut perms: Vec<Vec<u16>> = Vec::with_capacity(gens.len());
        for (gi, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::Input(format!("perm: generator {gi} has {} images (degree {degree})", g.len())));
            }
            let mut seen = vec![false; degree];
            for (pos, &img) in g.iter().enumerate() {
                if img == 0 || img > degree {
                    return Err(Error::Input(format!(
                        "perm: generator {gi} position {} maps to {img}, outside 1..{degree}",
                        pos + 1
                    )));
                }
                if std::mem::replace(&mut seen[img - 1], true) {
                    return Err(Error::Input(format!(
                        "perm: generator {gi} is not a bijection (image {img} repeated)"
                    )));
                }
            }
            perms.push(g.iter().map(|&x| (x - 1) as u16).collect());
        }
        let id: Vec<u16> = (0..degree as u16).collect();
        let compose = |x: &[u16], y: &[u16]| -> Vec<u16> { x.iter().map(|&i| y[i as usize]).collect() };
        let mut elems: Vec<Vec<u16>> = vec![id.clone()];
        let mut index: HashMap<Vec<u16>, u32> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for s in &perms {
                let y = compose(&elems[i], s);
                if !index.contains_key(&y) {
                    if elems.len() >= cap {
                        return Err(Error::SizeCap(format!("perm: closure exceeds order cap {cap}")));
                    }
                    index.insert(y.clone(), elems.len() as u32);
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elems[a], &elems[b])];
            }
        }
        let gen_idx = perms.iter().map(|s| index[s]).collect();
        Ok(FiniteGroup::from_raw(n, table, gen_idx))
    }

    /// Direct product with element `(a, b)` at index `a·|G2| + b`.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<(FiniteGroup, Subgroup, Subgroup)> {
        let (n1, n2) = (g1.order(), g2.order());
        let n = n1 * n2;
        if n > DEFAULT_ORDER_CAP {
            return Err(Error::SizeCap(format!("product of order {n} exceeds cap {DEFAULT_ORDER_CAP}")));
        }
        let mut table = vec![0u32; n * n];
        for a1 in 0..n1 as u32 {
            for b1 in 0..n2 as u32 {
                for a2 in 0..n1 as u32 {
                    for b2 in 0..n2 as u32 {
                        let x = a1 as usize * n2 + b1 as usize;
                        let y = a2 as usize * n2 + b2 as usize;
                        table[x * n + y] = g1.mul(a1, a2) * n2 as u32 + g2.mul(b1, b2);
                    }
                }
            }
        }
        let left_gens: Vec<u32> = g1.generators().iter().map(|&s| s * n2 as u32).collect();
        let right_gens: Vec<u32> = g2.generators().to_vec();
        let gens = left_gens.iter().chain(&right_gens).copied().collect();
        let g = FiniteGroup::from_raw(n, table, gens);
        let left = Subgroup { elements: (0..n1 as u32).map(|a| a * n2 as u32).collect(), generators: left_gens };
        let right = Subgroup { elements: (0..n2 as u32).collect(), generators: right_gens };
        Ok((g, left, right))
    }

    /// `N ⋊ G0` where `gen_action[i]` is the automorphism of `N` (as an
    /// element map) induced by the `i`-th generator of `G0`. Element `(σ, g)`
    /// sits at index `σ·|G0| + g`; `(σ₁,g₁)(σ₂,g₂) = (σ₁·φ_{g₁}(σ₂), g₁g₂)`.
    pub fn semidirect_product(n: &FiniteGroup, g0: &FiniteGroup, gen_action: &[Vec<u32>]) -> Result<Semidirect> {
        let (nn, ng) = (n.order(), g0.order());
        if gen_action.len() != g0.generators().len() {
            return Err(Error::Input(format!(
                "semidirect: {} automorphisms given for {} acting generators",
                gen_action.len(),
                g0.generators().len()
            )));
        }
        for (i, phi) in gen_action.iter().enumerate() {
            check_automorphism(n, phi).map_err(|e| Error::Input(format!("semidirect: generator {i}: {e}")))?;
        }
        // extend along a spanning tree, then check the homomorphism property
        let tree = g0.spanning_tree();
        let mut action: Vec<Vec<u32>> = vec![Vec::new(); ng];
        action[0] = (0..nn as u32).collect();
        for &g in tree.bfs.iter().skip(1) {
            let p = &action[tree.parent[g as usize] as usize];
            let s = &gen_action[tree.via[g as usize] as usize];
            action[g as usize] = (0..nn).map(|x| p[s[x] as usize]).collect();
        }
        for g in 0..ng {
            for (si, &s) in g0.generators().iter().enumerate() {
                let gs = g0.mul(g as u32, s) as usize;
                let phi_s = &gen_action[si];
                if (0..nn).any(|x| action[gs][x] != action[g][phi_s[x] as usize]) {
                    return Err(Error::Input("semidirect: action is not a homomorphism into Aut(N)".into()));
                }
            }
        }
        let total = nn * ng;
        if total > DEFAULT_ORDER_CAP {
            return Err(Error::SizeCap(format!("semidirect product of order {total} exceeds cap")));
        }
        let mut table = vec![0u32; total * total];
        for s1 in 0..nn {
            for g1 in 0..ng {
                let phi = &action[g1];
                for s2 in 0..nn {
                    let s = n.mul(s1 as u32, phi[s2]) as usize;
                    for g2 in 0..ng {
                        let g = g0.mul(g1 as u32, g2 as u32) as usize;
                        table[(s1 * ng + g1) * total + s2 * ng + g2] = (s * ng + g) as u32;
                    }
                }
            }
        }
        let normal_gens: Vec<u32> = n.generators().iter().map(|&s| s * ng as u32).collect();
        let comp_gens: Vec<u32> = g0.generators().to_vec();
        let gens = normal_gens.iter().chain(&comp_gens).copied().collect();
        let group = FiniteGroup::from_raw(total, table, gens);
        let normal = Subgroup { elements: (0..nn as u32).map(|s| s * ng as u32).collect(), generators: normal_gens };
        let complement = Subgroup { elements: (0..ng as u32).collect(), generators: comp_gens };
        Ok(Semidirect { group, normal, complement, action })
    }

    /// Quotient by a normal subgroup. Cosets are numbered by their least
    /// element in increasing order.
    pub fn quotient_group(&self, h: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(h) {
            return Err(Error::Input("quotient: subgroup is not normal".into()));
        }
        let n = self.order();
        let mut projection = vec![u32::MAX; n];
        let mut reps: Vec<u32> = Vec::new();
        for g in 0..n as u32 {
            if projection[g as usize] != u32::MAX {
                continue;
            }
            let label = reps.len() as u32;
            reps.push(g);
            for &x in &h.elements {
                projection[self.mul(g, x) as usize] = label;
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = projection[self.mul(a, b) as usize];
            }
        }
        let gens = self.generators().iter().map(|&s| projection[s as usize]).collect();
        Ok(Quotient { group: FiniteGroup::from_raw(q, table, gens), projection })
    }
}

/// Checks that an element map is an automorphism.
pub(crate) fn check_automorphism(g: &FiniteGroup, phi: &[u32]) -> std::result::Result<(), String> {
    let n = g.order();
    if phi.len() != n {
        return Err(format!("map has {} entries, group has order {n}", phi.len()));
    }
    let mut seen = vec![false; n];
    for &x in phi {
        if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
            return Err("map is not a bijection".into());
        }
    }
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if phi[g.mul(a, b) as usize] != g.mul(phi[a as usize], phi[b as usize]) {
                return Err(format!("map does not preserve the product of {a} and {b}"));
            }
        }
    }
    Ok(())
}
