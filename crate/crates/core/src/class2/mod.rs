//! Class-2 central quotients of Schur covers of abelian `p`-groups.
//!
//! An element is a pair `(a; c)`: `a` lies in the abelian part
//! `⊕ Z/p^{n_i}` (exponents non-increasing) and `c` in the central part
//! `C/H`, where `C = ⊕_{i<j} Z/p^{n_j}` is spanned by the basic
//! commutators and `H` is a chosen subgroup. The product is
//! `(a; c)(b; d) = (a + b; c + d + ε(a, b))` with the bilinear cocycle
//! `ε(a, b)_{ij} = −a_j·b_i`.
//!
//! Central vectors are embedded in `(Z/P)^N`, `P = p^{n_1}`, by scaling the
//! `(i, j)` coordinate by `P / p^{n_j}`, so that subgroups of `C` become
//! ordinary submodules and reduction modulo `H` is a canonical echelon
//! reduction.

mod certificate;
mod materialize;
mod search;

pub use certificate::{
    certify, check_class, eq8_eval, fij_eval, route_b, ClassRecord, FamilyCertificate, FiveTerm, RouteB, RouteBOptions,
    Transgression, Verdict,
};
pub use materialize::Materialized;
pub use search::{an_cyclic_check, wedge_commuting_search, WedgeSearch, DEFAULT_PAIR_CAP};

use crate::linalg::{subquotient, FinAbGroup, ModSpan, Subquotient};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct CentralFamily {
    pub id: String,
    pub p: u64,
    /// Family parameter (the `n` in the constructor), recorded for reports.
    pub param: u32,
    pub exponents: Vec<u32>,
    pairs: Vec<(usize, usize)>,
    pair_mod: Vec<u64>,
    scale: Vec<u64>,
    part_mod: Vec<u64>,
    big: u64,
    relations: Vec<Vec<u64>>,
    h_span: ModSpan,
    central: Subquotient,
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).filter(|&q| q < 1 << 62).ok_or_else(|| Error::SizeCap(format!("{p}^{e} is too large")))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl CentralFamily {
    /// `relations` are generators of `H` in commutator coordinates, ordered
    /// like [`CentralFamily::pairs`].
    pub fn new(id: &str, p: u64, param: u32, exponents: Vec<u32>, relations: Vec<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(Error::Input("exponents must be positive".into()));
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input("exponents must be non-increasing".into()));
        }
        let t = exponents.len();
        let big = checked_pow(p, exponents[0])?;
        let part_mod: Vec<u64> = exponents.iter().map(|&e| p.pow(e)).collect();
        let mut pairs = Vec::new();
        for i in 0..t {
            for j in i + 1..t {
                pairs.push((i, j));
            }
        }
        let pair_mod: Vec<u64> = pairs.iter().map(|&(_, j)| part_mod[j]).collect();
        let scale: Vec<u64> = pair_mod.iter().map(|&q| big / q).collect();
        let n = pairs.len();
        for (ri, r) in relations.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Input(format!("relation {ri} has {} coordinates, expected {n}", r.len())));
            }
        }
        let embed = |c: &[u64]| -> Vec<u64> {
            c.iter().zip(&pair_mod).zip(&scale).map(|((&x, &q), &s)| x % q * s % big).collect()
        };
        let h_rows: Vec<Vec<u64>> = relations.iter().map(|r| embed(r)).collect();
        let h_span = ModSpan::from_rows(big.max(2), n.max(1), &h_rows);
        let basis: Vec<Vec<u64>> =
            (0..n).map(|k| (0..n).map(|l| if l == k { scale[k] } else { 0 }).collect()).collect();
        let mut full = basis.clone();
        full.extend(h_rows.iter().cloned());
        let central = subquotient(&full, &h_rows, big.max(2), n.max(1))?;
        Ok(CentralFamily {
            id: id.into(),
            p,
            param,
            exponents,
            pairs,
            pair_mod,
            scale,
            part_mod,
            big,
            relations,
            h_span,
            central,
        })
    }

    /// The Schur cover of `⊕ Z/p^{n_i}` itself.
    pub fn schur_cover(p: u64, exponents: Vec<u32>) -> Result<Self> {
        CentralFamily::new("cover", p, 0, exponents, Vec::new())
    }

    /// `n + 3` generators of order `p`, with `H` generated by
    /// `[σ₁,σ_s][σ_{s+1},σ_{s+2}]` for `2 ≤ s ≤ n+1`.
    pub fn saltman(p: u64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("saltman family needs n ≥ 1".into()));
        }
        let t = n as usize + 3;
        let mut fam = CentralFamily::new("saltman", p, n, vec![1; t], Vec::new())?;
        let rels: Vec<Vec<u64>> = (2..=n as usize + 1)
            .map(|s| {
                let mut r = vec![0u64; fam.pairs.len()];
                r[fam.pair_index(1, s)] = 1;
                r[fam.pair_index(s + 1, s + 2)] = 1;
                r
            })
            .collect();
        fam = CentralFamily::new("saltman", p, n, vec![1; t], rels)?;
        Ok(fam)
    }

    /// Four generators of order `p^n`, with `H` generated by
    /// `[σ₁,σ₂][σ₃,σ₄]`.
    pub fn four_generator(p: u64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("family needs n ≥ 1".into()));
        }
        let probe = CentralFamily::new("thm54", p, n, vec![n; 4], Vec::new())?;
        let mut r = vec![0u64; 6];
        r[probe.pair_index(1, 2)] = 1;
        r[probe.pair_index(3, 4)] = 1;
        CentralFamily::new("thm54", p, n, vec![n; 4], vec![r])
    }

    /// Number of abelian-part generators.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Commutator coordinates `(i, j)`, `i < j`, zero-based.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Index of the one-based pair `(i, j)`.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        self.pairs.iter().position(|&q| q == (i - 1, j - 1)).expect("valid pair")
    }

    pub fn pair_moduli(&self) -> &[u64] {
        &self.pair_mod
    }

    pub fn part_moduli(&self) -> &[u64] {
        &self.part_mod
    }

    pub fn relations(&self) -> &[Vec<u64>] {
        &self.relations
    }

    /// `P`, the largest cyclic order in the abelian part.
    pub fn top_modulus(&self) -> u64 {
        self.big
    }

    /// Size of the abelian part.
    pub fn abelian_size(&self) -> u64 {
        self.part_mod.iter().product()
    }

    /// Invariants of the central part `C/H`.
    pub fn central_invariants(&self) -> &FinAbGroup {
        &self.central.invariants
    }

    pub fn central_size(&self) -> u128 {
        self.central.invariants.order().unwrap_or(1)
    }

    /// Group order as a power of `p`.
    pub fn order_log_p(&self) -> u32 {
        let c = self.central_size();
        let mut k = 0;
        let mut x = c;
        while x > 1 {
            x /= self.p as u128;
            k += 1;
        }
        self.exponents.iter().sum::<u32>() + k
    }

    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.order_log_p())
    }

    /// Little-endian mixed-radix decoding of an abelian-part index.
    pub fn decode(&self, mut idx: u64) -> Vec<u64> {
        self.part_mod
            .iter()
            .map(|&q| {
                let r = idx % q;
                idx /= q;
                r
            })
            .collect()
    }

    pub fn encode(&self, a: &[u64]) -> u64 {
        let mut x = 0;
        for (i, &q) in self.part_mod.iter().enumerate().rev() {
            x = x * q + a[i] % q;
        }
        x
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.part_mod).map(|((x, y), q)| (x + y) % q).collect()
    }

    pub fn mul_scalar(&self, k: u64, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.part_mod).map(|(x, q)| k % q * x % q).collect()
    }

    /// Order of `a` in the abelian part.
    pub fn part_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.part_mod)
            .map(|(&x, &q)| if x == 0 { 1 } else { q / num_integer::gcd(x, q) })
            .max()
            .unwrap_or(1)
    }

    /// `ε(a, b)` in commutator coordinates.
    pub fn cover_cocycle(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pairs.iter().zip(&self.pair_mod).map(|(&(i, j), &q)| (q - a[j] % q * (b[i] % q) % q) % q).collect()
    }

    /// `ε(a, b) − ε(b, a)` in commutator coordinates (not reduced modulo `H`).
    pub fn commutator_form(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pairs
            .iter()
            .zip(&self.pair_mod)
            .map(|(&(i, j), &q)| (a[i] % q * (b[j] % q) % q + q - a[j] % q * (b[i] % q) % q) % q)
            .collect()
    }

    /// Commutator-coordinate vector embedded in `(Z/P)^N`.
    pub fn embed(&self, c: &[u64]) -> Vec<u64> {
        c.iter().zip(&self.pair_mod).zip(&self.scale).map(|((&x, &q), &s)| x % q * s % self.big).collect()
    }

    /// Inverse of [`CentralFamily::embed`] on embedded vectors.
    pub fn unembed(&self, v: &[u64]) -> Vec<u64> {
        v.iter().zip(&self.scale).map(|(&x, &s)| x / s).collect()
    }

    /// Canonical representative in `C/H` of an embedded vector.
    pub fn reduce_central(&self, embedded: &[u64]) -> Vec<u64> {
        self.h_span.reduce(embedded)
    }

    /// Whether a commutator-coordinate vector lies in `H`.
    pub fn in_relations(&self, c: &[u64]) -> bool {
        self.h_span.contains(&self.embed(c))
    }

    /// Whether elements with abelian parts `a` and `b` commute.
    pub fn commute(&self, a: &[u64], b: &[u64]) -> bool {
        self.in_relations(&self.commutator_form(a, b))
    }

    /// Whether `b ∈ ⟨a⟩` in the abelian part.
    pub fn in_cyclic(&self, a: &[u64], b: &[u64]) -> bool {
        let ord = self.part_order(a);
        let mut x = vec![0u64; a.len()];
        for _ in 0..ord {
            if x == b {
                return true;
            }
            x = self.add(&x, a);
        }
        false
    }

    /// Whether `⟨a, b⟩` is cyclic (subgroups of a cyclic `p`-group form a
    /// chain, so one generator must contain the other).
    pub fn generate_cyclic(&self, a: &[u64], b: &[u64]) -> bool {
        self.in_cyclic(a, b) || self.in_cyclic(b, a)
    }

    /// Product of two elements with central parts in embedded form.
    pub fn mul(&self, x: (&[u64], &[u64]), y: (&[u64], &[u64])) -> (Vec<u64>, Vec<u64>) {
        let a = self.add(x.0, y.0);
        let e = self.embed(&self.cover_cocycle(x.0, y.0));
        let c: Vec<u64> = x.1.iter().zip(y.1).zip(&e).map(|((p, q), r)| (p + q + r) % self.big).collect();
        (a, self.reduce_central(&c))
    }

    /// Generators of the central part as embedded vectors with their orders.
    pub fn central_generators(&self) -> &[(u64, Vec<u64>)] {
        &self.central.generators
    }

    /// Number of abelian-part elements `a` with `(a; 0)` central.
    pub fn central_abelian_count(&self) -> u64 {
        let t = self.rank();
        let units: Vec<Vec<u64>> = (0..t).map(|k| (0..t).map(|l| u64::from(l == k)).collect()).collect();
        (0..self.abelian_size())
            .filter(|&idx| {
                let a = self.decode(idx);
                units.iter().all(|e| self.commute(&a, e))
            })
            .count() as u64
    }

    /// Whether the commutators `β(e_i, e_j)` span the central part.
    pub fn central_is_derived(&self) -> bool {
        // β(e_i, e_j) is the (i, j) unit vector, so the commutators span C
        // and therefore its image C/H
        let t = self.rank();
        let mut span = ModSpan::new(self.big.max(2), self.pairs.len().max(1));
        for i in 0..t {
            for j in i + 1..t {
                let mut a = vec![0; t];
                let mut b = vec![0; t];
                a[i] = 1;
                b[j] = 1;
                span.insert(&self.embed(&self.commutator_form(&a, &b)));
            }
        }
        for r in &self.relations {
            span.insert(&self.embed(r));
        }
        let whole: u128 = self.pair_mod.iter().map(|&q| q as u128).product();
        span.order() == whole
    }
}
