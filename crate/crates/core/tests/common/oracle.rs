//! Independent dense reference for small groups: integral bar homology.
//!
//! Works only from a multiplication table. `H₂(G, Z)` is the torsion of
//! `C₂ / ∂C₃` on unnormalized bar chains, and adding the commuting-pair
//! cycles `[x|y] − [y|x]` gives the quotient whose dual is the unramified
//! part. Both are computed prime by prime with a local Smith form over
//! `Z/p^K`, `K` one more than the `p`-adic valuation of `|G|`.

#![allow(dead_code)]

fn primes_of(mut n: usize) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p as u64, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

fn val(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(q as i128) as u64
}

/// Valuations of the Smith diagonal of the relation rows over `Z/p^k`,
/// padded with `k` for missing pivots.
#[allow(clippy::needless_range_loop)]
fn local_diagonal(rows: &[Vec<i64>], ncols: usize, p: u64, k: u32) -> Vec<u32> {
    let q = p.pow(k);
    let red = |x: i64| x.rem_euclid(q as i64) as u64;
    // triangularize row by row
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; ncols];
    for r in rows {
        let mut v: Vec<u64> = r.iter().map(|&x| red(x)).collect();
        for c in 0..ncols {
            if v[c] == 0 {
                continue;
            }
            match &mut basis[c] {
                None => {
                    basis[c] = Some(v);
                    break;
                }
                Some(b) => {
                    if val(v[c], p, k) < val(b[c], p, k) {
                        std::mem::swap(b, &mut v);
                    }
                    let vb = val(b[c], p, k);
                    let pv = p.pow(vb);
                    let f = (v[c] / pv) * inv_mod(b[c] / pv, q) % q;
                    for j in c..ncols {
                        v[j] = (v[j] + q - f * b[j] % q) % q;
                    }
                }
            }
        }
    }
    let mut m: Vec<Vec<u64>> = basis.into_iter().flatten().collect();
    // full Smith form of the square-ish remainder
    let nr = m.len();
    let mut diag = Vec::new();
    let mut cols: Vec<usize> = (0..ncols).collect();
    for t in 0..nr {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..nr {
            for &j in &cols[t..] {
                if m[i][j] != 0 {
                    let v = val(m[i][j], p, k);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        m.swap(t, bi);
        let pos = cols.iter().position(|&c| c == bj).unwrap();
        cols.swap(t, pos);
        let pc = cols[t];
        let pv = p.pow(v);
        let u = inv_mod(m[t][pc] / pv, q);
        for i in t + 1..nr {
            if m[i][pc] != 0 {
                let f = (m[i][pc] / pv) * u % q;
                for j in 0..ncols {
                    m[i][j] = (m[i][j] + q - f * m[t][j] % q) % q;
                }
            }
        }
        // column clearing does not change the remaining block's span
        diag.push(v);
    }
    diag.resize(ncols, k);
    diag
}

fn cokernel_torsion(rows: &[Vec<i64>], ncols: usize, order: usize) -> Vec<u64> {
    let mut divisors: Vec<(u64, u32)> = Vec::new();
    for (p, e) in primes_of(order) {
        let k = e + 1;
        for v in local_diagonal(rows, ncols, p, k) {
            if v >= 1 && v < k {
                divisors.push((p, v));
            }
        }
    }
    invariant_factors(&divisors)
}

/// Merge prime-power divisors into invariant factors `d₁ | d₂ | …`.
fn invariant_factors(divisors: &[(u64, u32)]) -> Vec<u64> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &(p, v) in divisors {
        by_prime.entry(p).or_default().push(v);
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, mut vs) in by_prime {
        vs.sort_unstable_by(|a, b| b.cmp(a));
        for (i, v) in vs.into_iter().enumerate() {
            out[len - 1 - i] *= p.pow(v);
        }
    }
    out
}

fn boundary_rows(table: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let n = table.len();
    let idx = |a: usize, b: usize| a * n + b;
    let mut rows = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut r = vec![0i64; n * n];
                r[idx(y, z)] += 1;
                r[idx(table[x][y], z)] -= 1;
                r[idx(x, table[y][z])] += 1;
                r[idx(x, y)] -= 1;
                if r.iter().any(|&e| e != 0) {
                    rows.push(r);
                }
            }
        }
    }
    rows
}

/// Invariant factors of the Schur multiplier.
pub fn h2_dense(table: &[Vec<usize>]) -> Vec<u64> {
    let n = table.len();
    cokernel_torsion(&boundary_rows(table), n * n, n)
}

/// Invariant factors of the unramified part.
pub fn b0_dense(table: &[Vec<usize>]) -> Vec<u64> {
    let n = table.len();
    let mut rows = boundary_rows(table);
    for x in 0..n {
        for y in 0..n {
            if table[x][y] == table[y][x] && x < y {
                let mut r = vec![0i64; n * n];
                r[x * n + y] += 1;
                r[y * n + x] -= 1;
                rows.push(r);
            }
        }
    }
    cokernel_torsion(&rows, n * n, n)
}
