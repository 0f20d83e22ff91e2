//! Integral representations of finite groups and their Tate cohomology.
//!
//! A lattice is `Z^r` with one invertible integer matrix per group element,
//! acting on column vectors.

mod kernel;
mod tate;

pub use kernel::{saltman_kernel_lattice, sylow_kernel_lattice, Branch, KernelLattice, SylowKernel};
pub use tate::{flabby_report, h1_lattice, tate_minus1, tate_zero, SubgroupTate, TateReport, DEFAULT_H1_CAP};

use serde::{Serialize, Serializer};

use crate::group::{FiniteGroup, Subgroup};
use crate::{Error, Result};

pub type Mat = Vec<Vec<i64>>;

pub(crate) fn identity(r: usize) -> Mat {
    (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()
}

pub(crate) fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let r = a.len();
    let c = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; c]; r];
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x != 0 {
                for (o, &y) in out[i].iter_mut().zip(&b[k]) {
                    *o += x * y;
                }
            }
        }
    }
    out
}

pub(crate) fn mat_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Permutation matrix sending basis vector `k` to `perm[k]`.
pub(crate) fn perm_matrix(perm: &[usize]) -> Mat {
    let r = perm.len();
    let mut m = vec![vec![0i64; r]; r];
    for (k, &j) in perm.iter().enumerate() {
        m[j][k] = 1;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    group: FiniteGroup,
    rank: usize,
    mats: Vec<Mat>,
}

#[derive(Serialize)]
struct LatticeView<'a> {
    rank: usize,
    group_order: usize,
    generators: &'a [u32],
    generator_matrices: Vec<&'a Mat>,
}

impl Serialize for GLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeView {
            rank: self.rank,
            group_order: self.group.order(),
            generators: self.group.generators(),
            generator_matrices: self.group.generators().iter().map(|&g| &self.mats[g as usize]).collect(),
        }
        .serialize(s)
    }
}

impl GLattice {
    /// Extends generator matrices (for `group.generators()`, in order) to
    /// the whole group and checks the homomorphism property.
    pub fn from_generator_matrices(group: &FiniteGroup, gens: &[Mat]) -> Result<Self> {
        if gens.len() != group.generators().len() {
            return Err(Error::Input(format!(
                "{} matrices given for {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        let rank = gens.first().map_or(0, Vec::len);
        for (i, m) in gens.iter().enumerate() {
            if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                return Err(Error::Input(format!("matrix {i} is not {rank}×{rank}")));
            }
        }
        let tree = group.spanning_tree();
        let mut mats = vec![Vec::new(); group.order()];
        mats[0] = identity(rank);
        for &g in tree.bfs.iter().skip(1) {
            let parent = &mats[tree.parent[g as usize] as usize];
            mats[g as usize] = mat_mul(parent, &gens[tree.via[g as usize] as usize]);
        }
        GLattice::from_element_matrices(group, mats)
    }

    /// One matrix per element; checked exhaustively.
    pub fn from_element_matrices(group: &FiniteGroup, mats: Vec<Mat>) -> Result<Self> {
        let n = group.order();
        if mats.len() != n {
            return Err(Error::Input(format!("{} matrices for a group of order {n}", mats.len())));
        }
        let rank = mats[0].len();
        if mats[0] != identity(rank) {
            return Err(Error::Input("identity must act trivially".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = group.mul(a as u32, b as u32) as usize;
                if mat_mul(&mats[a], &mats[b]) != mats[ab] {
                    return Err(Error::Input(format!("action is not a homomorphism at elements ({a}, {b})")));
                }
            }
        }
        Ok(GLattice { group: group.clone(), rank, mats })
    }

    pub fn trivial(group: &FiniteGroup, rank: usize) -> Self {
        GLattice { group: group.clone(), rank, mats: vec![identity(rank); group.order()] }
    }

    /// `Z[G/H]` with the left coset action; basis ordered by least coset
    /// representative.
    pub fn permutation(group: &FiniteGroup, h: &Subgroup) -> Result<Self> {
        let reps = group.left_transversal(h);
        let mut coset = vec![0usize; group.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &x in &h.elements {
                coset[group.mul(r, x) as usize] = i;
            }
        }
        let mats = group
            .elements()
            .map(|g| {
                let perm: Vec<usize> = reps.iter().map(|&r| coset[group.mul(g, r) as usize]).collect();
                perm_matrix(&perm)
            })
            .collect();
        GLattice::from_element_matrices(group, mats)
    }

    pub fn regular(group: &FiniteGroup) -> Self {
        GLattice::permutation(group, &group.trivial_subgroup()).expect("regular action")
    }

    /// Rank one, elements outside the index-2 subgroup `kernel` act by `−1`.
    pub fn sign(group: &FiniteGroup, kernel: &Subgroup) -> Result<Self> {
        if kernel.order() * 2 != group.order() {
            return Err(Error::Input("sign lattice needs an index-2 subgroup".into()));
        }
        let mats = group.elements().map(|g| vec![vec![if kernel.contains(g) { 1 } else { -1 }]]).collect();
        GLattice::from_element_matrices(group, mats)
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Input("direct sum over different groups".into()));
        }
        let r = self.rank + other.rank;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = vec![vec![0i64; r]; r];
                for i in 0..self.rank {
                    m[i][..self.rank].copy_from_slice(&a[i]);
                }
                for i in 0..other.rank {
                    m[self.rank + i][self.rank..].copy_from_slice(&b[i]);
                }
                m
            })
            .collect();
        Ok(GLattice { group: self.group.clone(), rank: r, mats })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, g: u32) -> &Mat {
        &self.mats[g as usize]
    }

    /// Whether every element of `h` acts as the identity.
    pub fn acts_trivially(&self, h: &Subgroup) -> bool {
        let id = identity(self.rank);
        h.elements.iter().all(|&g| self.mats[g as usize] == id)
    }

    /// The same lattice regarded over `G/K` for a normal subgroup `K` acting
    /// trivially; `projection` maps elements to quotient elements.
    pub fn descend(&self, quotient: &FiniteGroup, projection: &[u32]) -> Result<Self> {
        let mut mats: Vec<Option<Mat>> = vec![None; quotient.order()];
        for g in self.group.elements() {
            let q = projection[g as usize] as usize;
            match &mats[q] {
                None => mats[q] = Some(self.mats[g as usize].clone()),
                Some(m) if m != &self.mats[g as usize] => {
                    return Err(Error::Input("kernel of the projection acts nontrivially".into()))
                }
                Some(_) => {}
            }
        }
        let mats = mats.into_iter().map(|m| m.expect("projection is onto")).collect();
        GLattice::from_element_matrices(quotient, mats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn permutation_ranks() {
        let s3 = corpus::symmetric(3);
        assert_eq!(GLattice::permutation(&s3, &s3.whole()).unwrap().rank(), 1);
        assert_eq!(GLattice::regular(&s3).rank(), 6);
        let c2 = s3.all_subgroups().into_iter().find(|h| h.order() == 2).unwrap();
        assert_eq!(GLattice::permutation(&s3, &c2).unwrap().rank(), 3);
    }

    #[test]
    fn bad_generator_matrix_is_rejected() {
        let c2 = corpus::cyclic(2);
        // an element of order 2 cannot act by a matrix of infinite order
        let m = vec![vec![1, 1], vec![0, 1]];
        assert!(GLattice::from_generator_matrices(&c2, &[m]).is_err());
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert!(GLattice::from_generator_matrices(&c2, &[swap]).is_ok());
    }
}
