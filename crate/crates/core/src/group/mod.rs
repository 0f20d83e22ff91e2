//! Finite groups given by Cayley tables.
//!
//! Elements are dense indices `0..order` with the identity at `0`. Every
//! constructor fixes a deterministic labeling so that downstream results
//! (generators, spanning trees, subgroup keys) are reproducible.

mod constructions;
pub mod corpus;
mod subgroups;

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{abelian_invariants, FinAbGroup, IntMatrix};
use crate::{Error, Result};

pub use constructions::{Quotient, Semidirect};
pub use subgroups::BicyclicOptions;

/// Default cap on the order of table groups.
pub const DEFAULT_ORDER_CAP: usize = 5000;

/// A finite group stored as a full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    gens: Vec<u32>,
}

/// A subgroup of some parent group, as sorted element indices of the parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<u32>,
    pub generators: Vec<u32>,
}

/// Center, derived subgroup, exponent and abelianization.
#[derive(Clone, Debug)]
pub struct GroupInvariants {
    pub center: Subgroup,
    pub derived: Subgroup,
    pub exponent: u64,
    pub abelianization: FinAbGroup,
}

/// Breadth-first spanning tree of the Cayley graph from the identity.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    /// Generator elements used as edge labels.
    pub gens: Vec<u32>,
    /// `parent[g]` with `g = parent[g]·gens[via[g]]`; unused at the identity.
    pub parent: Vec<u32>,
    pub via: Vec<u32>,
    /// Elements in breadth-first order, identity first.
    pub bfs: Vec<u32>,
}

impl SpanningTree {
    /// Whether the edge `g --s--> g·s` (generator index `s`) is a tree edge.
    pub fn is_tree_edge(&self, g: u32, s: usize, product: u32) -> bool {
        product != 0 && self.parent[product as usize] == g && self.via[product as usize] == s as u32
    }

    /// Generator indices along the tree path from the identity to `g`.
    pub fn word(&self, mut g: u32) -> Vec<u32> {
        let mut w = Vec::new();
        while g != 0 {
            w.push(self.via[g as usize]);
            g = self.parent[g as usize];
        }
        w.reverse();
        w
    }
}

impl FiniteGroup {
    /// Internal constructor: table with identity `0`, assumed valid.
    pub(crate) fn from_raw(order: usize, table: Vec<u32>, gens: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inverse[a] = row.iter().position(|&x| x == 0).expect("missing inverse") as u32;
        }
        let mut g = FiniteGroup { order, table, inverse, gens: Vec::new() };
        g.gens = g.normalize_gens(gens);
        g
    }

    fn normalize_gens(&self, gens: Vec<u32>) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for s in gens {
            if s != 0 && !out.contains(&s) {
                out.push(s);
            }
        }
        let span = self.closure(&out);
        if span.len() == self.order {
            out
        } else {
            self.greedy_generators()
        }
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FiniteGroup::from_raw(1, vec![0], vec![])
    }

    /// Group from a multiplication table over `0..n` (any identity label).
    /// Checks the Latin property, identity, and associativity (exhaustively up
    /// to order 64, on a fixed random sample beyond).
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Input("table: empty table".into()));
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(Error::SizeCap(format!("table of order {n} exceeds cap {DEFAULT_ORDER_CAP}")));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Input(format!("table: row {i} has length {} (expected {n})", r.len())));
            }
            let mut seen = vec![false; n];
            for (j, &x) in r.iter().enumerate() {
                if x >= n {
                    return Err(Error::Input(format!("table: entry ({i},{j}) = {x} out of range")));
                }
                if seen[x] {
                    return Err(Error::Input(format!("table: row {i} repeats {x}")));
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for (i, r) in rows.iter().enumerate() {
                if seen[r[j]] {
                    return Err(Error::Input(format!("table: column {j} repeats {} (row {i})", r[j])));
                }
                seen[r[j]] = true;
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::Input("table: no identity element".into()))?;
        // relabel so that the identity is 0
        let lab = |x: usize| -> usize {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[lab(a) * n + lab(b)] = lab(rows[a][b]) as u32;
            }
        }
        let g = FiniteGroup::from_raw(n, table, vec![]);
        g.check_associative()?;
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a as u32, b as u32), c as u32) != self.mul(a as u32, self.mul(b as u32, c as u32))
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Err(Error::Input(format!("table: not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(Error::Input(format!("table: not associative at ({a},{b},{c})")));
                }
            }
        }
        Ok(())
    }

    /// Cyclic group `Z/n` with generator `1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        FiniteGroup::from_raw(n, table, if n > 1 { vec![1] } else { vec![] })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `g·x·g⁻¹`.
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    /// Copy of the group with a different generating set.
    pub fn with_generators(&self, gens: &[u32]) -> Result<Self> {
        let span = self.closure(gens);
        if span.len() != self.order {
            return Err(Error::Input("with_generators: elements do not generate the group".into()));
        }
        let mut g = self.clone();
        g.gens = gens.iter().copied().filter(|&s| s != 0).collect();
        g.gens.dedup();
        Ok(g)
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn power(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 0u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, &a)| self.gens[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> u64 {
        use num_integer::Integer;
        self.elements().map(|a| self.element_order(a)).fold(1, |acc, o| acc.lcm(&o))
    }

    /// Sorted multiset of element orders, an isomorphism surrogate.
    pub fn order_census(&self) -> Vec<(u64, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for a in self.elements() {
            *m.entry(self.element_order(a)).or_insert(0usize) += 1;
        }
        m.into_iter().collect()
    }

    /// Closure of a set of elements, in breadth-first order from the identity.
    pub(crate) fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// Greedy generating set: scan elements in index order, keep any element
    /// outside the span of those kept so far.
    fn greedy_generators(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        for a in 1..self.order as u32 {
            if !inside[a as usize] {
                gens.push(a);
                for x in self.closure(&gens) {
                    inside[x as usize] = true;
                }
            }
        }
        gens
    }

    pub fn subgroup_generated(&self, gens: &[u32]) -> Subgroup {
        let mut elements = self.closure(gens);
        elements.sort_unstable();
        let mut generators: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        generators.dedup();
        Subgroup { elements, generators }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: self.elements().collect(), generators: self.gens.clone() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0], generators: vec![] }
    }

    pub fn spanning_tree(&self) -> SpanningTree {
        let n = self.order;
        let mut parent = vec![0u32; n];
        let mut via = vec![0u32; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut bfs = vec![0u32];
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for (si, &s) in self.gens.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = x;
                    via[y as usize] = si as u32;
                    bfs.push(y);
                    queue.push_back(y);
                }
            }
        }
        SpanningTree { gens: self.gens.clone(), parent, via, bfs }
    }

    /// Relation matrix of the abelianization on the generating set:
    /// rows `w(x) + e_s − w(x·s)` with `w` the tree word-count vector.
    pub(crate) fn abelian_relations(&self) -> Vec<Vec<i64>> {
        let tree = self.spanning_tree();
        let k = self.gens.len();
        let mut w = vec![vec![0i64; k]; self.order];
        for &x in tree.bfs.iter().skip(1) {
            let mut v = w[tree.parent[x as usize] as usize].clone();
            v[tree.via[x as usize] as usize] += 1;
            w[x as usize] = v;
        }
        let mut rows = std::collections::BTreeSet::new();
        for x in self.elements() {
            for (si, &s) in self.gens.iter().enumerate() {
                let y = self.mul(x, s);
                let r: Vec<i64> = (0..k).map(|j| w[x as usize][j] + i64::from(j == si) - w[y as usize][j]).collect();
                if r.iter().any(|&v| v != 0) {
                    rows.insert(r);
                }
            }
        }
        rows.into_iter().collect()
    }

    pub fn abelianization(&self) -> FinAbGroup {
        let rows = self.abelian_relations();
        let k = self.gens.len();
        let m = IntMatrix::from_dense(&rows, k);
        abelian_invariants(&m)
    }

    pub fn center(&self) -> Subgroup {
        let elements: Vec<u32> =
            self.elements().filter(|&z| self.gens.iter().all(|&s| self.mul(z, s) == self.mul(s, z))).collect();
        let generators = elements.iter().copied().filter(|&z| z != 0).collect();
        let mut s = Subgroup { elements, generators };
        s.generators = self.minimal_generators_of(&s);
        s
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let mut comms: Vec<u32> = Vec::new();
        let mut seen = vec![false; self.order];
        for x in self.elements() {
            for y in self.elements() {
                let c = self.commutator(x, y);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    comms.push(c);
                }
            }
        }
        let s = self.subgroup_generated(&comms);
        let generators = self.minimal_generators_of(&s);
        Subgroup { elements: s.elements, generators }
    }

    /// Greedy generating set of a subgroup, scanning its elements in order.
    pub fn minimal_generators_of(&self, h: &Subgroup) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        for &a in &h.elements {
            if !inside[a as usize] {
                gens.push(a);
                for x in self.closure(&gens) {
                    inside[x as usize] = true;
                }
            }
        }
        gens
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            center: self.center(),
            derived: self.derived_subgroup(),
            exponent: self.exponent(),
            abelianization: self.abelianization(),
        }
    }

    /// Relabels elements by a permutation fixing the identity: element `x`
    /// becomes `perm[x]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        let n = self.order;
        if perm.len() != n || perm[0] != 0 {
            return Err(Error::Input("relabel: permutation must fix the identity".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p as usize >= n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::Input("relabel: not a permutation".into()));
            }
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] as usize * n + perm[b] as usize] = perm[self.table[a * n + b] as usize];
            }
        }
        let gens = self.gens.iter().map(|&s| perm[s as usize]).collect();
        Ok(FiniteGroup::from_raw(n, table, gens))
    }

    /// The table as rows of element indices.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.table[a * self.order + b] as usize).collect()).collect()
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let mut inside = vec![false; self.order];
        for &x in &h.elements {
            inside[x as usize] = true;
        }
        self.gens.iter().all(|&g| h.elements.iter().all(|&x| inside[self.conj(g, x) as usize]))
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Position of a parent element inside `elements`.
    pub fn index_of(&self, x: u32) -> Option<u32> {
        self.elements.binary_search(&x).ok().map(|i| i as u32)
    }

    /// The subgroup as a standalone group; local element `i` is parent
    /// element `elements[i]` (so the identity stays at `0`).
    pub fn to_group(&self, parent: &FiniteGroup) -> FiniteGroup {
        let n = self.elements.len();
        let mut pos = vec![u32::MAX; parent.order()];
        for (i, &x) in self.elements.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                let c = pos[parent.mul(a, b) as usize];
                assert!(c != u32::MAX, "subgroup not closed");
                table[i * n + j] = c;
            }
        }
        let gens = self.generators.iter().map(|&g| pos[g as usize]).collect();
        FiniteGroup::from_raw(n, table, gens)
    }
}
