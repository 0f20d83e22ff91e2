//! Canonical row forms, kernels, solving and subquotients over `Z/m`.
//!
//! The modulus is split into prime powers. Over each local ring `Z/p^k` an
//! [`Echelon`] maintains a fully reduced Howell basis: pivots are `p^v`,
//! entries above a pivot lie in `[0, p^v)`, and for every row the multiple
//! `p^(k-v)·row` lies in the span of the rows with later pivots. The last
//! property makes membership decidable by plain reduction and makes the
//! form unique for a given span.

use super::{FinAbGroup, IntMatrix};
use crate::{Error, Result};

const NONE: usize = usize::MAX;

/// Prime factorization by trial division.
pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PrimePower {
    pub p: u64,
    pub k: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Self {
        PrimePower { p, k, q: p.pow(k) }
    }

    /// `p`-adic valuation of a residue, `k` for zero.
    pub fn val(&self, x: u64) -> u32 {
        let mut x = x % self.q;
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn pow(&self, e: u32) -> u64 {
        self.p.pow(e)
    }

    fn inv(&self, unit: u64) -> u64 {
        mod_inverse(unit, self.q).expect("not a unit")
    }
}

/// `x[from..] -= t * y[from..]` modulo `q`.
fn axpy(x: &mut [u64], t: u64, y: &[u64], from: usize, q: u64) {
    let neg = (q - t % q) % q;
    if neg == 0 {
        return;
    }
    for (a, &b) in x[from..].iter_mut().zip(&y[from..]) {
        if b != 0 {
            *a = (*a + neg * b) % q;
        }
    }
}

/// Incremental Howell basis over `Z/p^k`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub pp: PrimePower,
    pub ncols: usize,
    rows: Vec<Vec<u64>>,
    cols: Vec<usize>,
    vals: Vec<u32>,
    pivot: Vec<usize>,
}

impl Echelon {
    pub fn new(pp: PrimePower, ncols: usize) -> Self {
        Echelon { pp, ncols, rows: Vec::new(), cols: Vec::new(), vals: Vec::new(), pivot: vec![NONE; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `log_p` of the number of elements in the span.
    pub fn log_order(&self) -> u64 {
        self.vals.iter().map(|&v| (self.pp.k - v) as u64).sum()
    }

    pub fn insert_sparse(&mut self, row: &[(usize, i64)]) {
        let q = self.pp.q as i64;
        let mut dense = vec![0u64; self.ncols];
        for &(c, v) in row {
            dense[c] = (dense[c] as i64 + v.rem_euclid(q)).rem_euclid(q) as u64;
        }
        self.insert(dense);
    }

    pub fn insert(&mut self, mut row: Vec<u64>) {
        debug_assert_eq!(row.len(), self.ncols);
        let q = self.pp.q;
        for x in row.iter_mut() {
            *x %= q;
        }
        let mut stack = vec![row];
        while let Some(mut x) = stack.pop() {
            let mut c = 0;
            loop {
                while c < self.ncols && x[c] == 0 {
                    c += 1;
                }
                if c == self.ncols {
                    break;
                }
                let v = self.pp.val(x[c]);
                let slot = self.pivot[c];
                if slot != NONE && self.vals[slot] <= v {
                    let t = x[c] / self.pp.pow(self.vals[slot]);
                    axpy(&mut x, t, &self.rows[slot], c, q);
                    debug_assert_eq!(x[c], 0);
                    c += 1;
                } else {
                    self.install(x, c, v, &mut stack);
                    break;
                }
            }
        }
    }

    fn install(&mut self, mut x: Vec<u64>, c: usize, v: u32, stack: &mut Vec<Vec<u64>>) {
        let q = self.pp.q;
        let pv = self.pp.pow(v);
        let unit = x[c] / pv;
        if unit != 1 {
            let ui = self.pp.inv(unit);
            for e in x[c..].iter_mut() {
                *e = *e * ui % q;
            }
        }
        debug_assert_eq!(x[c], pv);
        self.reduce_tail(&mut x, c + 1);
        if v > 0 {
            let s = self.pp.pow(self.pp.k - v);
            let sat: Vec<u64> = x.iter().map(|&e| e * s % q).collect();
            if sat.iter().any(|&e| e != 0) {
                stack.push(sat);
            }
        }
        let slot = if self.pivot[c] != NONE {
            let s = self.pivot[c];
            let old = std::mem::replace(&mut self.rows[s], x);
            stack.push(old);
            self.vals[s] = v;
            s
        } else {
            self.rows.push(x);
            self.cols.push(c);
            self.vals.push(v);
            self.pivot[c] = self.rows.len() - 1;
            self.rows.len() - 1
        };
        for j in 0..self.rows.len() {
            if j == slot || self.cols[j] > c {
                continue;
            }
            let e = self.rows[j][c];
            if e >= pv {
                let mut r = std::mem::take(&mut self.rows[j]);
                axpy(&mut r, e / pv, &self.rows[slot], c, q);
                self.reduce_tail(&mut r, c + 1);
                self.rows[j] = r;
            }
        }
    }

    fn reduce_tail(&self, x: &mut [u64], from: usize) {
        let q = self.pp.q;
        for c in from..self.ncols {
            if x[c] == 0 {
                continue;
            }
            let s = self.pivot[c];
            if s == NONE {
                continue;
            }
            let pv = self.pp.pow(self.vals[s]);
            if x[c] >= pv {
                axpy(x, x[c] / pv, &self.rows[s], c, q);
            }
        }
    }

    /// Canonical representative of `x + span`.
    pub fn reduce(&self, x: &mut [u64]) {
        for e in x.iter_mut() {
            *e %= self.pp.q;
        }
        self.reduce_tail(x, 0);
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        let q = self.pp.q;
        let mut y: Vec<u64> = x.iter().map(|&e| e % q).collect();
        for c in 0..self.ncols {
            if y[c] == 0 {
                continue;
            }
            let s = self.pivot[c];
            if s == NONE {
                return false;
            }
            let pv = self.pp.pow(self.vals[s]);
            if !y[c].is_multiple_of(pv) {
                return false;
            }
            let t = y[c] / pv;
            axpy(&mut y, t, &self.rows[s], c, q);
        }
        true
    }

    /// Rows sorted by pivot column, as `(column, valuation, row)`.
    pub fn sorted_rows(&self) -> Vec<(usize, u32, &Vec<u64>)> {
        let mut out: Vec<(usize, u32, &Vec<u64>)> =
            self.cols.iter().zip(&self.vals).zip(&self.rows).map(|((&c, &v), r)| (c, v, r)).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// Howell rows whose pivot column is at least `c`.
    fn rows_from(&self, c: usize) -> Vec<Vec<u64>> {
        self.sorted_rows().into_iter().filter(|e| e.0 >= c).map(|e| e.2.clone()).collect()
    }
}

/// Right kernel `{x : R x = 0}` over `Z/p^k`, as Howell rows.
pub(crate) fn kernel_local<'a, I>(pp: PrimePower, ncols: usize, rows: I) -> Vec<Vec<u64>>
where
    I: IntoIterator<Item = &'a [(usize, i64)]>,
{
    let mut e = Echelon::new(pp, ncols);
    for r in rows {
        e.insert_sparse(r);
    }
    kernel_of_echelon(&e)
}

fn kernel_of_echelon(e: &Echelon) -> Vec<Vec<u64>> {
    let ncols = e.ncols;
    let h = e.sorted_rows();
    let rho = h.len();
    // rows (H^T | I): left kernel of H^T is the right kernel of H
    let mut e2 = Echelon::new(e.pp, rho + ncols);
    for j in 0..ncols {
        let mut row = vec![0u64; rho + ncols];
        for (i, (_, _, hr)) in h.iter().enumerate() {
            row[i] = hr[j];
        }
        row[rho + j] = 1;
        e2.insert(row);
    }
    e2.rows_from(rho).into_iter().map(|r| r[rho..].to_vec()).collect()
}

/// Left relations `{t : Σ t_i g_i = 0}` among dense generators over `Z/p^k`.
fn relations_local(pp: PrimePower, gens: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let a = gens.len();
    let mut e = Echelon::new(pp, a);
    for c in 0..ncols {
        e.insert(gens.iter().map(|g| g[c] % pp.q).collect());
    }
    kernel_of_echelon(&e)
}

/// Per-prime-power decomposition of a modulus with CRT idempotents.
#[derive(Clone, Debug)]
pub(crate) struct Crt {
    pub m: u64,
    pub parts: Vec<(PrimePower, u64)>,
}

impl Crt {
    pub fn new(m: u64) -> Self {
        assert!((2..=1u64 << 31).contains(&m), "modulus out of range");
        let parts = factorize(m)
            .into_iter()
            .map(|(p, k)| {
                let pp = PrimePower::new(p, k);
                let co = m / pp.q;
                let e = if co == 1 { 1 } else { co * mod_inverse(co % pp.q, pp.q).unwrap() % m };
                (pp, e)
            })
            .collect();
        Crt { m, parts }
    }

    /// Lift a vector over `Z/q` to `Z/m`, zero at the other primes.
    pub fn lift(&self, idem: u64, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&v| v * idem % self.m).collect()
    }
}

/// Row span over `Z/m` with canonical reduction.
#[derive(Clone, Debug)]
pub struct ModSpan {
    crt: Crt,
    ncols: usize,
    parts: Vec<Echelon>,
}

impl ModSpan {
    pub fn new(m: u64, ncols: usize) -> Self {
        let crt = Crt::new(m);
        let parts = crt.parts.iter().map(|&(pp, _)| Echelon::new(pp, ncols)).collect();
        ModSpan { crt, ncols, parts }
    }

    pub fn from_rows(m: u64, ncols: usize, rows: &[Vec<u64>]) -> Self {
        let mut s = ModSpan::new(m, ncols);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn modulus(&self) -> u64 {
        self.crt.m
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn insert(&mut self, row: &[u64]) {
        for e in self.parts.iter_mut() {
            let q = e.pp.q;
            e.insert(row.iter().map(|&x| x % q).collect());
        }
    }

    pub fn insert_sparse(&mut self, row: &[(usize, i64)]) {
        for e in self.parts.iter_mut() {
            e.insert_sparse(row);
        }
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.parts.iter().all(|e| e.contains(x))
    }

    /// Canonical representative of the coset `x + span`.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.ncols];
        for (e, &(_, idem)) in self.parts.iter().zip(&self.crt.parts) {
            let mut y: Vec<u64> = x.iter().map(|&v| v % e.pp.q).collect();
            e.reduce(&mut y);
            for (o, v) in out.iter_mut().zip(self.crt.lift(idem, &y)) {
                *o = (*o + v) % self.crt.m;
            }
        }
        out
    }

    /// Number of elements of the span.
    pub fn order(&self) -> u128 {
        self.parts.iter().map(|e| (e.pp.p as u128).pow(e.log_order() as u32)).product()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|e| e.rank() == 0)
    }

    /// Canonical rows: per pivot column, the CRT sum of the local rows.
    pub fn canonical_rows(&self) -> Vec<Vec<u64>> {
        let m = self.crt.m;
        let mut by_col: std::collections::BTreeMap<usize, Vec<u64>> = Default::default();
        for (e, &(_, idem)) in self.parts.iter().zip(&self.crt.parts) {
            for (c, _, r) in e.sorted_rows() {
                let lifted = self.crt.lift(idem, r);
                let slot = by_col.entry(c).or_insert_with(|| vec![0; self.ncols]);
                for (s, v) in slot.iter_mut().zip(lifted) {
                    *s = (*s + v) % m;
                }
            }
        }
        by_col.into_values().collect()
    }

    /// A generating set: the local Howell rows lifted to `Z/m`.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.canonical_rows()
    }
}

fn sparse_rows(a: &IntMatrix) -> Vec<&[(usize, i64)]> {
    (0..a.rows()).map(|r| a.row(r)).collect()
}

fn modulus_of(a: &IntMatrix) -> u64 {
    a.modulus().expect("matrix must carry a modulus")
}

/// Canonical Howell form of the row span of `a` over `Z/m`.
pub fn howell_form(a: &IntMatrix) -> IntMatrix {
    let m = modulus_of(a);
    let mut s = ModSpan::new(m, a.cols());
    for r in sparse_rows(a) {
        s.insert_sparse(r);
    }
    IntMatrix::from_dense_mod(&s.canonical_rows(), a.cols(), m)
}

/// Whether `x` lies in the row span of `a`.
pub fn span_contains(a: &IntMatrix, x: &[u64]) -> bool {
    let m = modulus_of(a);
    let mut s = ModSpan::new(m, a.cols());
    for r in sparse_rows(a) {
        s.insert_sparse(r);
    }
    s.contains(x)
}

/// Generators of the right kernel `{x : A x = 0}` over `Z/m`.
pub fn kernel_mod(a: &IntMatrix) -> Vec<Vec<u64>> {
    let m = modulus_of(a);
    kernel_rows(m, a.cols(), &sparse_rows(a))
}

pub(crate) fn kernel_rows(m: u64, ncols: usize, rows: &[&[(usize, i64)]]) -> Vec<Vec<u64>> {
    let crt = Crt::new(m);
    let mut out = Vec::new();
    for &(pp, idem) in &crt.parts {
        for r in kernel_local(pp, ncols, rows.iter().copied()) {
            out.push(crt.lift(idem, &r));
        }
    }
    out
}

/// Right kernel of a dense matrix over `Z/m`.
pub(crate) fn kernel_dense(m: u64, ncols: usize, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let crt = Crt::new(m);
    let mut out = Vec::new();
    for &(pp, idem) in &crt.parts {
        let mut e = Echelon::new(pp, ncols);
        for r in rows {
            e.insert(r.iter().map(|&x| x % pp.q).collect());
        }
        for r in kernel_of_echelon(&e) {
            out.push(crt.lift(idem, &r));
        }
    }
    out
}

/// A solution of `A x = b` over `Z/m`. Within each prime-power component
/// the returned solution is the canonical (lexicographically reduced)
/// representative of the solution coset.
pub fn solve_mod(a: &IntMatrix, b: &[u64]) -> Option<Vec<u64>> {
    let m = modulus_of(a);
    assert_eq!(b.len(), a.rows(), "right-hand side length mismatch");
    let crt = Crt::new(m);
    let r = a.rows();
    let c = a.cols();
    let at = a.transpose();
    let mut x = vec![0u64; c];
    for &(pp, idem) in &crt.parts {
        let q = pp.q;
        // rows (A^T | I): reducing (b | 0) accumulates the coefficients
        let mut e = Echelon::new(pp, r + c);
        for j in 0..c {
            let mut row = vec![0u64; r + c];
            for &(i, v) in at.row(j) {
                row[i] = v.rem_euclid(q as i64) as u64;
            }
            row[r + j] = 1;
            e.insert(row);
        }
        let mut y = vec![0u64; r + c];
        for (i, &v) in b.iter().enumerate() {
            y[i] = v % q;
        }
        for col in 0..r {
            if y[col] == 0 {
                continue;
            }
            let s = e.pivot[col];
            if s == NONE {
                return None;
            }
            let pv = pp.pow(e.vals[s]);
            if !y[col].is_multiple_of(pv) {
                return None;
            }
            let t = y[col] / pv;
            axpy(&mut y, t, &e.rows[s], col, q);
        }
        // first block vanished: b = x·A^T with x the negated second block
        let mut z = vec![0u64; r + c];
        for j in 0..c {
            z[r + j] = (q - y[r + j]) % q;
        }
        e.reduce_tail(&mut z, r);
        let local: Vec<u64> = z[r..].to_vec();
        for (xi, v) in x.iter_mut().zip(crt.lift(idem, &local)) {
            *xi = (*xi + v) % m;
        }
    }
    Some(x)
}

/// The subquotient `U/V` of `(Z/m)^n` with an explicit basis.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub modulus: u64,
    pub invariants: FinAbGroup,
    /// One generator per elementary divisor: `(order, vector in (Z/m)^n)`.
    pub generators: Vec<(u64, Vec<u64>)>,
}

/// Smith form over `Z/p^k` of a relation matrix on `a` generators. Returns
/// the cyclic orders (as exponents of `p`) and the matching generator
/// combinations (rows of the inverse column transform).
#[allow(clippy::needless_range_loop)]
fn local_smith(pp: PrimePower, mut w: Vec<Vec<u64>>, a: usize) -> Vec<(u32, Vec<u64>)> {
    let q = pp.q;
    let mut qinv: Vec<Vec<u64>> = (0..a).map(|i| (0..a).map(|j| u64::from(i == j)).collect()).collect();
    let nrows = w.len();
    let mut exps = vec![pp.k; a];
    let mut t = 0;
    while t < nrows.min(a) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = pp.val(x);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        w.swap(t, bi);
        if bj != t {
            for row in w.iter_mut() {
                row.swap(t, bj);
            }
            qinv.swap(t, bj);
        }
        let pv = pp.pow(v);
        let unit = w[t][t] / pv;
        if unit != 1 {
            let ui = pp.inv(unit);
            for x in w[t].iter_mut() {
                *x = *x * ui % q;
            }
        }
        let pivot_row = w[t].clone();
        for i in t + 1..nrows {
            let e = w[i][t];
            if e != 0 {
                axpy(&mut w[i], e / pv, &pivot_row, t, q);
            }
        }
        for j in t + 1..a {
            let e = w[t][j];
            if e != 0 {
                let f = e / pv;
                w[t][j] = 0;
                // column j -= f·column t  ⇒  row t of Q^{-1} += f·row j
                let rj = qinv[j].clone();
                for (x, y) in qinv[t].iter_mut().zip(rj) {
                    *x = (*x + f % q * y) % q;
                }
            }
        }
        exps[t] = v;
        t += 1;
    }
    exps.into_iter().zip(qinv).filter(|(e, _)| *e > 0).collect()
}

/// Subquotient `span(U)/span(V)` over `Z/m` with generators.
pub fn subquotient(u: &[Vec<u64>], v: &[Vec<u64>], m: u64, ncols: usize) -> Result<Subquotient> {
    let crt = Crt::new(m);
    let mut gens: Vec<(u64, Vec<u64>)> = Vec::new();
    for &(pp, idem) in &crt.parts {
        let q = pp.q;
        let mut eu = Echelon::new(pp, ncols);
        for r in u {
            eu.insert(r.iter().map(|&x| x % q).collect());
        }
        let vq: Vec<Vec<u64>> = v.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
        if let Some(bad) = vq.iter().position(|r| !eu.contains(r)) {
            return Err(Error::Input(format!(
                "subquotient: generator {bad} of the smaller span is not contained in the larger"
            )));
        }
        let ugens: Vec<Vec<u64>> = eu.sorted_rows().into_iter().map(|e| e.2.clone()).collect();
        let a = ugens.len();
        if a == 0 {
            continue;
        }
        let mut stacked = ugens.clone();
        stacked.extend(vq);
        let rels = relations_local(pp, &stacked, ncols);
        // project relations onto the U coordinates and canonicalize
        let mut er = Echelon::new(pp, a);
        for r in rels {
            er.insert(r[..a].to_vec());
        }
        let w: Vec<Vec<u64>> = er.sorted_rows().into_iter().map(|e| e.2.clone()).collect();
        for (e, comb) in local_smith(pp, w, a) {
            let mut vec = vec![0u64; ncols];
            for (coef, g) in comb.iter().zip(&ugens) {
                if *coef != 0 {
                    for (x, y) in vec.iter_mut().zip(g) {
                        *x = (*x + coef * y) % q;
                    }
                }
            }
            gens.push((pp.pow(e), crt.lift(idem, &vec)));
        }
    }
    gens.sort_by_key(|g| g.0);
    let invariants = FinAbGroup::from_cyclic_orders(gens.iter().map(|g| g.0));
    Ok(Subquotient { modulus: m, invariants, generators: gens })
}

/// Invariant factors of `span(U)/span(V)` for matrices over `Z/m`.
pub fn subquotient_invariants(u: &IntMatrix, v: &IntMatrix) -> Result<FinAbGroup> {
    let m = modulus_of(u);
    if v.modulus() != Some(m) || u.cols() != v.cols() {
        return Err(Error::Input("subquotient: incompatible matrices".into()));
    }
    let ud = u.to_dense_mod(m);
    let vd = v.to_dense_mod(m);
    Ok(subquotient(&ud, &vd, m, u.cols())?.invariants)
}
