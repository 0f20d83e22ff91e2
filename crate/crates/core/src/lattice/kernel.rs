//! Kernels of free or permutation lattices mapping onto a character group.
//!
//! For an abelian normal subgroup `N` of `N ⋊ G0`, characters are realized
//! as value vectors `χ: N → Z/e` (`e` the exponent of `N`), with
//! `(g·χ)(τ) = χ(g⁻¹τg)`. The kernel of a lattice surjection onto the
//! character group is computed by integer saturation.

use num_bigint::BigInt;
use serde::Serialize;

use super::tate::to_i64;
use super::{flabby_report, perm_matrix, GLattice, Mat, TateReport};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{int_kernel, lattice_quotient, smith_normal_form, IntMatrix};
use crate::{Error, Result};

/// All homomorphisms `N → Z/e` as value vectors, sorted.
fn characters(n: &FiniteGroup, e: u64) -> Result<Vec<Vec<u64>>> {
    if !n.is_abelian() {
        return Err(Error::Input("character lattice needs an abelian normal subgroup".into()));
    }
    let gens = n.generators().to_vec();
    let tree = n.spanning_tree();
    let total = (e as usize)
        .checked_pow(gens.len() as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::SizeCap("too many candidate characters".into()))?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let vals: Vec<u64> = gens
            .iter()
            .map(|_| {
                let v = (c % e as usize) as u64;
                c /= e as usize;
                v
            })
            .collect();
        let mut chi = vec![0u64; n.order()];
        for &g in tree.bfs.iter().skip(1) {
            chi[g as usize] = (chi[tree.parent[g as usize] as usize] + vals[tree.via[g as usize] as usize]) % e;
        }
        let hom = n
            .elements()
            .all(|a| n.elements().all(|b| chi[n.mul(a, b) as usize] == (chi[a as usize] + chi[b as usize]) % e));
        if hom {
            out.push(chi);
        }
    }
    out.sort();
    if out.len() != n.order() {
        return Err(Error::Internal("character count differs from |N|".into()));
    }
    Ok(out)
}

/// `char_action[g][k]`: index of `g·χ_k`.
fn character_action(chars: &[Vec<u64>], g0: &FiniteGroup, action: &[Vec<u32>]) -> Result<Vec<Vec<usize>>> {
    g0.elements()
        .map(|g| {
            let inv = &action[g0.inv(g) as usize];
            chars
                .iter()
                .map(|chi| {
                    let moved: Vec<u64> = (0..chi.len()).map(|t| chi[inv[t] as usize]).collect();
                    chars.binary_search(&moved).map_err(|_| Error::Internal("character not closed under action".into()))
                })
                .collect()
        })
        .collect()
}

/// Saturated basis (as columns) of `{x ∈ Z^r : Σ x_k·image_k = 0 mod e}`.
fn kernel_of_map(images: &[Vec<u64>], e: u64) -> Result<Vec<Vec<i64>>> {
    let r = images.len();
    let d = images.first().map_or(0, Vec::len);
    if e <= 1 || d == 0 {
        return Ok((0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect());
    }
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(d);
    for t in 0..d {
        let mut row: Vec<i64> = images.iter().map(|v| v[t] as i64).collect();
        row.extend((0..d).map(|u| if u == t { e as i64 } else { 0 }));
        rows.push(row);
    }
    let k = int_kernel(&IntMatrix::from_dense(&rows, r + d));
    k.iter().map(|v| to_i64(&v[..r])).collect()
}

/// The action of the ambient lattice restricted to a full-rank sublattice
/// with the given basis columns.
fn restrict_action(ambient: &GLattice, basis: &[Vec<i64>]) -> Result<GLattice> {
    let r = ambient.rank();
    let bmat: Vec<Vec<i64>> = (0..r).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    let smith = smith_normal_form(&IntMatrix::from_dense(&bmat, basis.len()));
    let g = ambient.group();
    let mats: Vec<Mat> = g
        .elements()
        .map(|x| {
            let a = ambient.matrix(x);
            let cols: Vec<Vec<i64>> = basis
                .iter()
                .map(|b| {
                    let img: Vec<BigInt> = super::mat_vec(a, b).into_iter().map(BigInt::from).collect();
                    let c = smith.solve(&img).ok_or_else(|| Error::Internal("sublattice is not stable".into()))?;
                    to_i64(&c)
                })
                .collect::<Result<_>>()?;
            Ok((0..basis.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect())
        })
        .collect::<Result<_>>()?;
    GLattice::from_element_matrices(g, mats)
}

fn index_in(ambient_rank: usize, basis: &[Vec<i64>]) -> Result<u128> {
    let unit: Vec<Vec<BigInt>> =
        (0..ambient_rank).map(|i| (0..ambient_rank).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
    let sub: Vec<Vec<BigInt>> = basis.iter().map(|b| b.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let q = lattice_quotient(&unit, &sub)?;
    q.order().ok_or_else(|| Error::Internal("sublattice has lower rank".into()))
}

/// A lattice, a full-rank sublattice given as a kernel, and the index.
#[derive(Clone, Debug, Serialize)]
pub struct KernelLattice {
    pub free: GLattice,
    pub kernel: GLattice,
    /// `[free : kernel]`, equal to the order of the character group.
    pub index: u128,
    pub characters: usize,
}

/// `0 → M → P → N* → 0` with `P` free on `w(χ)·g` and `w(χ)·g ↦ χ`.
/// `gen_action[i]` is the automorphism of `N` given by the `i`-th generator
/// of `G0` (conjugation).
pub fn saltman_kernel_lattice(n: &FiniteGroup, g0: &FiniteGroup, gen_action: &[Vec<u32>]) -> Result<KernelLattice> {
    let sd = FiniteGroup::semidirect_product(n, g0, gen_action)?;
    let e = n.exponent();
    let chars = characters(n, e)?;
    let act = character_action(&chars, g0, &sd.action)?;
    let ng = g0.order();
    let r = chars.len() * ng;
    let idx = |k: usize, g: usize| k * ng + g;
    let mats: Vec<Mat> = g0
        .elements()
        .map(|h| {
            let mut perm = vec![0usize; r];
            for k in 0..chars.len() {
                for g in 0..ng {
                    perm[idx(k, g)] = idx(act[h as usize][k], g0.mul(h, g as u32) as usize);
                }
            }
            perm_matrix(&perm)
        })
        .collect();
    let free = GLattice::from_element_matrices(g0, mats)?;
    let images: Vec<Vec<u64>> = (0..r).map(|b| chars[b / ng].clone()).collect();
    let basis = kernel_of_map(&images, e)?;
    let kernel = restrict_action(&free, &basis)?;
    let index = index_in(r, &basis)?;
    Ok(KernelLattice { free, kernel, index, characters: chars.len() })
}

/// Which cited result covers the kernel lattice over `G0/H_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `p ∤ [G0 : H_p]`: cohomological triviality is checked as evidence.
    CoprimeIndex,
    /// Every Sylow subgroup of `G0/H_p` is cyclic: invertibility is
    /// asserted, with Tate groups recorded only as evidence.
    CyclicSylow,
    NoClaim,
}

#[derive(Clone, Debug, Serialize)]
pub struct SylowKernel {
    pub p: u64,
    pub sylow_order: usize,
    /// Elements of `G0` centralizing the Sylow `p`-part of `N`.
    pub stabilizer: Subgroup,
    /// Least representatives of the left cosets of the stabilizer.
    pub coset_representatives: Vec<u32>,
    pub lattice: KernelLattice,
    pub stabilizer_acts_trivially: bool,
    /// The kernel regarded over `G0/H_p`.
    pub descended: GLattice,
    pub branch: Branch,
    pub report: TateReport,
    /// For the coprime branch: whether all Tate groups vanish.
    pub evidence_pass: Option<bool>,
}

fn all_sylows_cyclic(g: &FiniteGroup) -> bool {
    let mut n = g.order();
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            let s = g.sylow_subgroup(p as u64);
            if !s.elements.iter().any(|&x| g.element_order(x) as usize == s.order()) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Kernel of `F_p → N_p*`, `u_{ij}(χ) ↦ h_j·χ`, where `F_p` has basis
/// `u_{ij}(χ)` (`i` over the stabilizer, `j` over coset representatives,
/// `χ` over characters of the Sylow `p`-part) and `h` sends `u_{ij}` to
/// `u_{ij'}` with `h·h_j ∈ h_{j'}H_p`.
pub fn sylow_kernel_lattice(
    n: &FiniteGroup,
    g0: &FiniteGroup,
    gen_action: &[Vec<u32>],
    p: u64,
    group_cap: usize,
) -> Result<SylowKernel> {
    if !(n.order() as u64).is_multiple_of(p) {
        return Err(Error::Input(format!("{p} does not divide |N| = {}", n.order())));
    }
    let sd = FiniteGroup::semidirect_product(n, g0, gen_action)?;
    let sylow = n.sylow_subgroup(p);
    let stab_elems: Vec<u32> =
        g0.elements().filter(|&g| sylow.elements.iter().all(|&t| sd.action[g as usize][t as usize] == t)).collect();
    let mut stabilizer = g0.subgroup_generated(&stab_elems);
    stabilizer.generators = g0.minimal_generators_of(&stabilizer);
    let reps = g0.left_transversal(&stabilizer);
    let (s, t) = (stabilizer.order(), reps.len());
    let mut coset = vec![0usize; g0.order()];
    for (j, &r) in reps.iter().enumerate() {
        for &x in &stabilizer.elements {
            coset[g0.mul(r, x) as usize] = j;
        }
    }

    let e = n.exponent();
    // characters of N vanishing off the p-part
    let chars: Vec<Vec<u64>> = characters(n, e)?
        .into_iter()
        .filter(|chi| {
            n.elements().all(|x| {
                let o = n.element_order(x);
                o.is_multiple_of(p) || chi[x as usize] == 0
            })
        })
        .collect();
    if chars.len() != sylow.order() {
        return Err(Error::Internal("p-part character count mismatch".into()));
    }
    let act = character_action(&chars, g0, &sd.action)?;
    let r = chars.len() * s * t;
    let idx = |k: usize, i: usize, j: usize| (k * s + i) * t + j;
    let mats: Vec<Mat> = g0
        .elements()
        .map(|h| {
            let mut perm = vec![0usize; r];
            for k in 0..chars.len() {
                for i in 0..s {
                    for (j, &hj) in reps.iter().enumerate() {
                        perm[idx(k, i, j)] = idx(k, i, coset[g0.mul(h, hj) as usize]);
                    }
                }
            }
            perm_matrix(&perm)
        })
        .collect();
    let free = GLattice::from_element_matrices(g0, mats)?;
    let image_of = |b: usize| -> usize {
        let (k, j) = (b / (s * t), b % t);
        act[reps[j] as usize][k]
    };
    // equivariance of u_{ij}(χ) ↦ h_j·χ
    for h in g0.elements() {
        for b in 0..r {
            let moved = free.matrix(h).iter().position(|row| row[b] == 1).expect("permutation");
            if image_of(moved) != act[h as usize][image_of(b)] {
                return Err(Error::Internal("character map is not equivariant".into()));
            }
        }
    }
    let images: Vec<Vec<u64>> = (0..r).map(|b| chars[image_of(b)].clone()).collect();
    let basis = kernel_of_map(&images, e)?;
    let kernel = restrict_action(&free, &basis)?;
    let index = index_in(r, &basis)?;
    let lattice = KernelLattice { free, kernel, index, characters: chars.len() };

    let stabilizer_acts_trivially =
        lattice.free.acts_trivially(&stabilizer) && lattice.kernel.acts_trivially(&stabilizer);
    let quotient = g0.quotient_group(&stabilizer)?;
    let descended = lattice.kernel.descend(&quotient.group, &quotient.projection)?;
    let branch = if !(t as u64).is_multiple_of(p) {
        Branch::CoprimeIndex
    } else if all_sylows_cyclic(&quotient.group) {
        Branch::CyclicSylow
    } else {
        Branch::NoClaim
    };
    let report = flabby_report(&descended, group_cap)?;
    let evidence_pass = (branch == Branch::CoprimeIndex).then_some(report.coh_trivial_evidence);
    Ok(SylowKernel {
        p,
        sylow_order: sylow.order(),
        stabilizer,
        coset_representatives: reps,
        lattice,
        stabilizer_acts_trivially,
        descended,
        branch,
        report,
        evidence_pass,
    })
}
