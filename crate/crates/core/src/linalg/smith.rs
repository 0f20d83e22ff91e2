use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FinAbGroup, IntMatrix};
use crate::{Error, Result};

pub(crate) type BigMat = Vec<Vec<BigInt>>;

/// Smith normal form `U·M·V = D` over the integers.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal of `D` (length `min(rows, cols)`), non-negative, each entry
    /// dividing the next among the nonzero ones.
    pub diag: Vec<BigInt>,
    pub u: BigMat,
    pub v: BigMat,
    pub rank: usize,
}

fn identity(n: usize) -> BigMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn row_axpy(m: &mut BigMat, dst: usize, src: usize, q: &BigInt) {
    // m[dst] -= q * m[src]
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(m: &mut BigMat, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(m: &mut BigMat, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Core elimination. Returns the diagonal, optionally accumulating the row
/// transform `u` and column transform `v`.
fn eliminate(a: &mut BigMat, cols: usize, mut u: Option<&mut BigMat>, mut v: Option<&mut BigMat>) -> Vec<BigInt> {
    let rows = a.len();
    let n = rows.min(cols);
    for t in 0..n {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap(t, pi);
        }
        swap_cols(a, t, pj);
        if let Some(v) = v.as_deref_mut() {
            swap_cols(v, t, pj);
        }
        loop {
            // clear column t below the pivot
            let mut residue: Option<usize> = None;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    row_axpy(a, i, t, &q);
                    if let Some(u) = u.as_deref_mut() {
                        row_axpy(u, i, t, &q);
                    }
                }
                if !a[i][t].is_zero() && residue.is_none_or(|r| a[i][t].abs() < a[r][t].abs()) {
                    residue = Some(i);
                }
            }
            if let Some(i) = residue {
                a.swap(t, i);
                if let Some(u) = u.as_deref_mut() {
                    u.swap(t, i);
                }
                continue;
            }
            // clear row t right of the pivot
            let mut residue: Option<usize> = None;
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    col_axpy(a, j, t, &q);
                    if let Some(v) = v.as_deref_mut() {
                        col_axpy(v, j, t, &q);
                    }
                }
                if !a[t][j].is_zero() && residue.is_none_or(|r| a[t][j].abs() < a[t][r].abs()) {
                    residue = Some(j);
                }
            }
            if let Some(j) = residue {
                swap_cols(a, t, j);
                if let Some(v) = v.as_deref_mut() {
                    swap_cols(v, t, j);
                }
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let mut bad: Option<usize> = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(a, t, i, &minus_one);
                    if let Some(u) = u.as_deref_mut() {
                        row_axpy(u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i].clone()).collect()
}

fn to_big(m: &IntMatrix) -> BigMat {
    m.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

pub(crate) fn mat_mul(a: &BigMat, b: &BigMat, inner: usize, cols: usize) -> BigMat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

impl Smith {
    fn compute(m: BigMat, rows: usize, cols: usize) -> Smith {
        let original = m.clone();
        let mut a = m;
        let mut u = identity(rows);
        let mut v = identity(cols);
        let diag = eliminate(&mut a, cols, Some(&mut u), Some(&mut v));
        let rank = diag.iter().take_while(|d| !d.is_zero()).count();
        let s = Smith { diag, u, v, rank };
        // U·M·V must reproduce D exactly
        let umv = mat_mul(&mat_mul(&s.u, &original, rows, cols), &s.v, cols, cols);
        for (i, row) in umv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, expect, "Smith normal form identity failed");
            }
        }
        s
    }

    /// Solve `M x = b` over the integers.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let cols = self.v.len();
        let ub: Vec<BigInt> = self.u.iter().map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
        let mut y = vec![BigInt::zero(); cols];
        for (i, val) in ub.iter().enumerate() {
            if i < self.rank {
                if !(val % &self.diag[i]).is_zero() {
                    return None;
                }
                y[i] = val / &self.diag[i];
            } else if !val.is_zero() {
                return None;
            }
        }
        Some(self.v.iter().map(|row| row.iter().zip(&y).map(|(x, yy)| x * yy).sum()).collect())
    }

    /// Basis of the integer kernel: columns of `V` beyond the rank.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let cols = self.v.len();
        (self.rank..cols).map(|j| self.v.iter().map(|row| row[j].clone()).collect()).collect()
    }
}

/// Smith normal form of an integer matrix with verified transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    assert!(m.modulus().is_none(), "Smith normal form expects an integer matrix");
    Smith::compute(to_big(m), m.rows(), m.cols())
}

pub(crate) fn smith_big(m: &BigMat, cols: usize) -> Smith {
    Smith::compute(m.clone(), m.len(), cols)
}

fn invariants_from_diag(diag: &[BigInt], ngens: usize) -> FinAbGroup {
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let orders = diag.iter().filter(|d| !d.is_zero()).map(|d| d.to_u64().expect("invariant factor exceeds 64 bits"));
    FinAbGroup::from_cyclic_orders(orders).with_free_rank(ngens - rank)
}

/// Invariants of `Z^n / rowspan(relations)`.
pub fn abelian_invariants(relations: &IntMatrix) -> FinAbGroup {
    let rows: Vec<Vec<i64>> = relations.to_dense();
    abelian_invariants_dense(&rows, relations.cols())
}

pub(crate) fn abelian_invariants_dense(rows: &[Vec<i64>], ngens: usize) -> FinAbGroup {
    let uniq: BTreeSet<&Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut a: BigMat = uniq.into_iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    if a.is_empty() {
        return FinAbGroup::trivial().with_free_rank(ngens);
    }
    let diag = eliminate(&mut a, ngens, None, None);
    invariants_from_diag(&diag, ngens)
}

pub(crate) fn abelian_invariants_big(rows: &BigMat, ngens: usize) -> FinAbGroup {
    let mut a: BigMat = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if a.is_empty() {
        return FinAbGroup::trivial().with_free_rank(ngens);
    }
    let diag = eliminate(&mut a, ngens, None, None);
    invariants_from_diag(&diag, ngens)
}

/// Saturated basis of `{x ∈ Z^cols : M x = 0}`.
pub fn int_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    if m.rows() == 0 {
        return identity(m.cols());
    }
    smith_normal_form(m).kernel()
}

/// An integer solution of `M x = b`, if one exists.
pub fn int_solve(m: &IntMatrix, b: &[i64]) -> Option<Vec<BigInt>> {
    let b: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    smith_normal_form(m).solve(&b)
}

/// Invariants of `L / span(sub)` where `L` is the lattice with the given
/// linearly independent basis and every vector of `sub` lies in `L`.
pub fn lattice_quotient(basis: &[Vec<BigInt>], sub: &[Vec<BigInt>]) -> Result<FinAbGroup> {
    let k = basis.len();
    if k == 0 {
        return Ok(FinAbGroup::trivial());
    }
    let r = basis[0].len();
    // matrix with the basis vectors as columns
    let b: BigMat = (0..r).map(|i| basis.iter().map(|v| v[i].clone()).collect()).collect();
    let s = smith_big(&b, k);
    if s.rank != k {
        return Err(Error::Internal("lattice basis is not independent".into()));
    }
    let mut coords: BigMat = Vec::with_capacity(sub.len());
    for v in sub {
        let c = s.solve(v).ok_or_else(|| Error::Internal("vector outside the lattice".into()))?;
        coords.push(c);
    }
    Ok(abelian_invariants_big(&coords, k))
}
