use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::modular::factorize;

/// A finitely generated abelian group `Z^f ⊕ Z/d_1 ⊕ … ⊕ Z/d_r` with
/// `d_1 | d_2 | … | d_r` and every `d_i ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub invariant_factors: Vec<u64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub free_rank: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonical group isomorphic to the direct sum of cyclic groups of the
    /// given orders (any order, 1 allowed).
    pub fn from_cyclic_orders<I: IntoIterator<Item = u64>>(orders: I) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for d in orders {
            assert!(d > 0, "cyclic order must be positive");
            for (p, k) in factorize(d) {
                by_prime.entry(p).or_default().push(k);
            }
        }
        Self::from_prime_powers(by_prime)
    }

    fn from_prime_powers(mut by_prime: BTreeMap<u64, Vec<u32>>) -> Self {
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, exps) in by_prime.iter_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, &k) in exps.iter().enumerate() {
                // largest exponents go to the largest invariant factors
                let idx = len - 1 - slot;
                factors[idx] *= p.pow(k);
            }
        }
        factors.retain(|&d| d > 1);
        FinAbGroup { invariant_factors: factors, free_rank: 0 }
    }

    pub fn with_free_rank(mut self, rank: usize) -> Self {
        self.free_rank = rank;
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().map(|&d| d as u128).product())
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Elementary divisors as `(p, k)` pairs, sorted.
    pub fn elementary_divisors(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self.invariant_factors.iter().flat_map(|&d| factorize(d)).collect();
        out.sort_unstable();
        out
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let orders = self.invariant_factors.iter().chain(&other.invariant_factors).copied();
        FinAbGroup::from_cyclic_orders(orders).with_free_rank(self.free_rank + other.free_rank)
    }

    /// Number of cyclic factors in the invariant-factor decomposition.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}
