use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::{FiniteGroup, Subgroup};

/// Options for bicyclic subgroup enumeration.
#[derive(Clone, Copy, Debug)]
pub struct BicyclicOptions {
    /// Keep only maximal subgroups, one per conjugacy class.
    pub reduce: bool,
}

impl Default for BicyclicOptions {
    fn default() -> Self {
        BicyclicOptions { reduce: true }
    }
}

type Bits = Vec<u64>;

fn to_bits(n: usize, elems: &[u32]) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for &x in elems {
        b[x as usize / 64] |= 1 << (x % 64);
    }
    b
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl FiniteGroup {
    /// `g·H·g⁻¹` as sorted elements.
    pub fn conjugate_subgroup(&self, g: u32, h: &Subgroup) -> Subgroup {
        let mut elements: Vec<u32> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        elements.sort_unstable();
        let generators = h.generators.iter().map(|&x| self.conj(g, x)).collect();
        Subgroup { elements, generators }
    }

    /// Least element list among the conjugates of `h`: a canonical key for
    /// its conjugacy class.
    pub fn conjugacy_key(&self, h: &Subgroup) -> Vec<u32> {
        self.elements().map(|g| self.conjugate_subgroup(g, h).elements).min().expect("nonempty group")
    }

    /// Abelian subgroups `⟨x, y⟩` with `xy = yx`.
    ///
    /// With reduction (the default) only maximal ones are kept, one per
    /// conjugacy class: restriction kernels shrink along inclusions and are
    /// unchanged by conjugation. Output is sorted by element list.
    pub fn bicyclic_subgroups(&self, opts: BicyclicOptions) -> Vec<Subgroup> {
        let n = self.order();
        let mut found: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        for x in 0..n as u32 {
            for y in x..n as u32 {
                if self.mul(x, y) != self.mul(y, x) {
                    continue;
                }
                let mut gens: Vec<u32> = Vec::new();
                let cx = self.closure(&[x]);
                if x != 0 {
                    gens.push(x);
                }
                if y != 0 && !cx.contains(&y) {
                    gens.push(y);
                }
                let mut elems = self.closure(&gens);
                elems.sort_unstable();
                found.entry(elems).or_insert(gens);
            }
        }
        let all: Vec<Subgroup> =
            found.into_iter().map(|(elements, generators)| Subgroup { elements, generators }).collect();
        if !opts.reduce {
            return all;
        }
        let bits: Vec<Bits> = all.iter().map(|s| to_bits(n, &s.elements)).collect();
        let mut order_idx: Vec<usize> = (0..all.len()).collect();
        order_idx.sort_by_key(|&i| std::cmp::Reverse(all[i].order()));
        let mut maximal: Vec<usize> = Vec::new();
        for &i in &order_idx {
            let covered = maximal.iter().any(|&j| all[j].order() > all[i].order() && subset(&bits[i], &bits[j]));
            if !covered {
                maximal.push(i);
            }
        }
        let mut classes: BTreeMap<Vec<u32>, Subgroup> = BTreeMap::new();
        for i in maximal {
            let key = self.conjugacy_key(&all[i]);
            if key == all[i].elements {
                classes.insert(key, all[i].clone());
            }
        }
        classes.into_values().collect()
    }

    /// Every subgroup, sorted by (order, element list).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let n = self.order();
        let mut known: HashSet<Vec<u32>> = HashSet::new();
        let mut cyclic: Vec<Subgroup> = Vec::new();
        for x in self.elements() {
            let s = self.subgroup_generated(&[x]);
            if known.insert(s.elements.clone()) {
                cyclic.push(s);
            }
        }
        let mut all: Vec<Subgroup> = cyclic.clone();
        let mut layer: Vec<Subgroup> = cyclic.clone();
        while !layer.is_empty() {
            let mut next: Vec<Subgroup> = Vec::new();
            for h in &layer {
                let hb = to_bits(n, &h.elements);
                for c in &cyclic {
                    let g = c.generators.first().copied().unwrap_or(0);
                    if hb[g as usize / 64] >> (g % 64) & 1 == 1 {
                        continue;
                    }
                    let mut gens = h.generators.clone();
                    gens.push(g);
                    let s = self.subgroup_generated(&gens);
                    if known.insert(s.elements.clone()) {
                        next.push(s);
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        for s in all.iter_mut() {
            s.generators = self.minimal_generators_of(s);
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        all
    }

    /// One subgroup per conjugacy class (the one with the least element
    /// list), sorted by (order, element list).
    pub fn subgroup_class_representatives(&self) -> Vec<Subgroup> {
        let all = self.all_subgroups();
        let keys: Vec<Vec<u32>> = all.par_iter().map(|h| self.conjugacy_key(h)).collect();
        all.into_iter().zip(keys).filter(|(h, k)| &h.elements == k).map(|(h, _)| h).collect()
    }

    /// A Sylow `p`-subgroup: a maximal `p`-subgroup built greedily in
    /// element order.
    pub fn sylow_subgroup(&self, p: u64) -> Subgroup {
        let is_p_power = |mut k: usize| {
            while k.is_multiple_of(p as usize) {
                k /= p as usize;
            }
            k == 1
        };
        let mut gens: Vec<u32> = Vec::new();
        let mut current = vec![0u32];
        for g in 1..self.order() as u32 {
            if current.contains(&g) || !is_p_power(self.element_order(g) as usize) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(g);
            let span = self.closure(&trial);
            if is_p_power(span.len()) {
                gens = trial;
                current = span;
            }
        }
        let mut s = self.subgroup_generated(&gens);
        s.generators = self.minimal_generators_of(&s);
        s
    }

    /// Right transversal of `h`: the least element of each right coset
    /// `h·x`, sorted.
    pub fn right_transversal(&self, h: &Subgroup) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in self.elements() {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &a in &h.elements {
                seen[self.mul(a, x) as usize] = true;
            }
        }
        reps
    }

    /// Left transversal of `h`: the least element of each left coset `x·h`.
    pub fn left_transversal(&self, h: &Subgroup) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in self.elements() {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &a in &h.elements {
                seen[self.mul(x, a) as usize] = true;
            }
        }
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn bicyclic_examples() {
        let c2c2 = corpus::elementary_abelian(2, 2);
        let b = c2c2.bicyclic_subgroups(BicyclicOptions::default());
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].order(), 4);
        let s3 = corpus::symmetric(3);
        let orders: Vec<usize> = s3.bicyclic_subgroups(BicyclicOptions::default()).iter().map(|s| s.order()).collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(sorted, vec![2, 3]);
        let q8 = corpus::quaternion(8);
        let b = q8.bicyclic_subgroups(BicyclicOptions::default());
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|s| s.order() == 4));
    }

    #[test]
    fn subgroup_counts() {
        // well-known subgroup counts
        assert_eq!(corpus::symmetric(3).all_subgroups().len(), 6);
        assert_eq!(corpus::dihedral(4).all_subgroups().len(), 10);
        assert_eq!(corpus::quaternion(8).all_subgroups().len(), 6);
        assert_eq!(corpus::symmetric(4).all_subgroups().len(), 30);
        assert_eq!(corpus::symmetric(4).subgroup_class_representatives().len(), 11);
    }

    #[test]
    fn sylow_orders() {
        let s4 = corpus::symmetric(4);
        assert_eq!(s4.sylow_subgroup(2).order(), 8);
        assert_eq!(s4.sylow_subgroup(3).order(), 3);
    }
}
