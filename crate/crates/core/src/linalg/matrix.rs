use serde::{Deserialize, Serialize};

/// Sparse integer matrix with per-row entries ordered by column. When a
/// modulus is set every stored entry lies in `[1, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
    modulus: Option<u64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Vec::new(); rows], modulus: None }
    }

    pub fn zeros_mod(rows: usize, cols: usize, m: u64) -> Self {
        assert!(m >= 2, "modulus must be at least 2");
        IntMatrix { rows, cols, data: vec![Vec::new(); rows], modulus: Some(m) }
    }

    pub fn from_dense(dense: &[Vec<i64>], cols: usize) -> Self {
        let mut out = IntMatrix::zeros(0, cols);
        for row in dense {
            out.push_row_dense(row);
        }
        out
    }

    pub fn from_dense_mod(dense: &[Vec<u64>], cols: usize, m: u64) -> Self {
        let mut out = IntMatrix::zeros_mod(0, cols, m);
        for row in dense {
            let r: Vec<i64> = row.iter().map(|&v| v as i64).collect();
            out.push_row_dense(&r);
        }
        out
    }

    pub fn identity(n: usize) -> Self {
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            out.data[i].push((i, 1));
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    fn normalize(&self, v: i64) -> i64 {
        match self.modulus {
            Some(m) => v.rem_euclid(m as i64),
            None => v,
        }
    }

    pub fn push_row_dense(&mut self, row: &[i64]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let entries = row.iter().enumerate().map(|(c, &v)| (c, self.normalize(v))).filter(|&(_, v)| v != 0).collect();
        self.data.push(entries);
        self.rows += 1;
    }

    /// Appends a row from `(column, value)` pairs; repeated columns are summed.
    pub fn push_row_sparse(&mut self, entries: &[(usize, i64)]) {
        let mut sorted: Vec<(usize, i64)> = entries.to_vec();
        sorted.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(sorted.len());
        for (c, v) in sorted {
            assert!(c < self.cols, "column out of range");
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        let row = merged.into_iter().map(|(c, v)| (c, self.normalize(v))).filter(|&(_, v)| v != 0).collect();
        self.data.push(row);
        self.rows += 1;
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r].binary_search_by_key(&c, |e| e.0).map(|i| self.data[r][i].1).unwrap_or(0)
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn row_dense(&self, r: usize) -> Vec<i64> {
        let mut out = vec![0; self.cols];
        for &(c, v) in &self.data[r] {
            out[c] = v;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row_dense(r)).collect()
    }

    /// Dense rows reduced into `[0, m)`.
    pub fn to_dense_mod(&self, m: u64) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| {
                let mut out = vec![0u64; self.cols];
                for &(c, v) in &self.data[r] {
                    out[c] = v.rem_euclid(m as i64) as u64;
                }
                out
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                cols[c].push((r, v));
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data: cols, modulus: self.modulus }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    /// Matrix-vector product over `Z/m`.
    pub fn mul_vec_mod(&self, x: &[u64], m: u64) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter().fold(0u64, |acc, &(c, v)| {
                    let v = v.rem_euclid(m as i64) as u64;
                    (acc + v * x[c] % m) % m
                })
            })
            .collect()
    }
}
