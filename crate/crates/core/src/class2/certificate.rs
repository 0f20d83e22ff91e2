//! Transgression image and lower-bound certificates.

use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::search::{predicted_pairs, wedge_commuting_search, WedgeSearch, DEFAULT_PAIR_CAP};
use super::CentralFamily;
use crate::cohomology::{is_coboundary, Cochain, H2Data};
use crate::group::corpus;
use crate::linalg::{kernel_dense, subquotient, FinAbGroup};
use crate::{Error, Result};

/// Value of the basic cocycle `f_{ij}(I, J) = −I_j·J_i` in `Z/p^{n_j}`
/// (one-based indices).
pub fn fij_eval(fam: &CentralFamily, (i, j): (usize, usize), a: &[u64], b: &[u64]) -> u64 {
    let q = fam.part_moduli()[j - 1];
    (q - a[j - 1] % q * (b[i - 1] % q) % q) % q
}

/// `f_{ij}` evaluated at `(c₁I + c₂J, d₁I + d₂J)`.
pub fn eq8_eval(
    fam: &CentralFamily,
    ij: (usize, usize),
    a: &[u64],
    b: &[u64],
    (c1, c2, d1, d2): (u64, u64, u64, u64),
) -> u64 {
    let x = fam.add(&fam.mul_scalar(c1, a), &fam.mul_scalar(c2, b));
    let y = fam.add(&fam.mul_scalar(d1, a), &fam.mul_scalar(d2, b));
    fij_eval(fam, ij, &x, &y)
}

/// The five-term data: `H¹(N)^G → H²(G/N) → H²(G)`.
#[derive(Clone, Debug, Serialize)]
pub struct Transgression {
    /// `H²` of the abelian quotient, one `Z/p^{n_j}` per pair.
    pub quotient_h2: FinAbGroup,
    /// Whether the table engine confirmed `quotient_h2`.
    pub quotient_h2_engine_checked: bool,
    /// Characters of the central part.
    pub central_characters: FinAbGroup,
    /// Transgressed characters in `f_{ij}` coordinates.
    pub transgressed: Vec<Vec<u64>>,
    /// The inflation image `H²(G/N)/im(transgression)`.
    pub image: FinAbGroup,
    /// Generators of the image in `f_{ij}` coordinates, with orders.
    pub image_generators: Vec<(u64, Vec<u64>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiveTerm {
    pub quotient_h2_order: u128,
    pub central_characters_order: u128,
    pub image_order: u128,
    pub exact: bool,
}

impl Transgression {
    pub fn compute(fam: &CentralFamily) -> Result<Self> {
        Self::compute_with(fam, 256)
    }

    /// `engine_limit` bounds the abelian quotient size for the independent
    /// table-engine check of `H²(G/N)`.
    pub fn compute_with(fam: &CentralFamily, engine_limit: u64) -> Result<Self> {
        let big = fam.top_modulus().max(2);
        let n = fam.pairs().len();
        let qmods = fam.pair_moduli();
        let quotient_h2 = FinAbGroup::from_cyclic_orders(qmods.iter().copied());

        let quotient_h2_engine_checked = fam.abelian_size() <= engine_limit;
        if quotient_h2_engine_checked {
            let orders: Vec<usize> = fam.part_moduli().iter().map(|&q| q as usize).collect();
            let g = corpus::abelian(&orders);
            let engine = H2Data::compute(&g, g.order().max(2) as u64)?;
            if engine.invariants() != &quotient_h2 {
                return Err(Error::Internal(format!(
                    "abelian quotient multiplier {:?} disagrees with the engine {:?}",
                    quotient_h2.invariant_factors,
                    engine.invariants().invariant_factors
                )));
            }
        }

        // characters of C/H: w with Σ w_k h_k / p^{n_j} ∈ Z for all h ∈ H
        let rels: Vec<Vec<u64>> = fam.relations().iter().map(|h| fam.embed(h)).collect();
        let chars: Vec<Vec<u64>> = if rels.is_empty() {
            (0..n).map(|k| (0..n).map(|l| u64::from(l == k)).collect()).collect()
        } else {
            kernel_dense(big, n, &rels)
        };
        let chars: Vec<Vec<u64>> = chars
            .into_iter()
            .map(|w| w.iter().zip(qmods).map(|(x, q)| x % q).collect::<Vec<u64>>())
            .filter(|w| w.iter().any(|&x| x != 0))
            .collect();

        let transgressed: Vec<Vec<u64>> = chars.iter().map(|v| transgress(fam, v)).collect::<Result<_>>()?;
        let embedded: Vec<Vec<u64>> = transgressed.iter().map(|c| fam.embed(c)).collect();
        let central_characters = subquotient(&embedded, &[], big, n.max(1))?.invariants;
        if &central_characters != fam.central_invariants() {
            return Err(Error::Internal(format!(
                "transgression is not injective: image {:?}, characters {:?}",
                central_characters.invariant_factors,
                fam.central_invariants().invariant_factors
            )));
        }
        let mut whole: Vec<Vec<u64>> =
            (0..n).map(|k| fam.embed(&(0..n).map(|l| u64::from(l == k)).collect::<Vec<u64>>())).collect();
        whole.extend(embedded.iter().cloned());
        let image = subquotient(&whole, &embedded, big, n.max(1))?;
        let image_generators = image.generators.iter().map(|(o, v)| (*o, fam.unembed(v))).collect();
        Ok(Transgression {
            quotient_h2,
            quotient_h2_engine_checked,
            central_characters,
            transgressed,
            image: image.invariants,
            image_generators,
        })
    }

    pub fn five_term(&self) -> FiveTerm {
        let o = |g: &FinAbGroup| g.order().unwrap_or(0);
        let (a, b, c) = (o(&self.quotient_h2), o(&self.central_characters), o(&self.image));
        FiveTerm { quotient_h2_order: a, central_characters_order: b, image_order: c, exact: a == b * c }
    }
}

/// `χ(c) ∈ Z/P`, representing `χ(c)/P ∈ Q/Z`, for a character given by
/// coordinates `v` (`χ(e_k) = v_k / p^{n_j}`).
fn character_value(fam: &CentralFamily, v: &[u64], c: &[u64]) -> u64 {
    let big = fam.top_modulus() as u128;
    let e = fam.embed(c);
    (v.iter().zip(&e).fold(0u128, |s, (&x, &y)| s + x as u128 * y as u128) % big) as u64
}

/// Coordinates of `χ∘ε` in the `f_{ij}` basis. Two bilinear cocycles on an
/// abelian group are cohomologous iff their alternations agree, and the
/// alternation of `f_{ij}` at `(e_i, e_j)` is `1/p^{n_j}`, so the
/// coordinates are read off from the alternation of `χ∘ε` on basis pairs.
fn transgress(fam: &CentralFamily, v: &[u64]) -> Result<Vec<u64>> {
    let t = fam.rank();
    let unit = |k: usize| -> Vec<u64> { (0..t).map(|l| u64::from(l == k)).collect() };
    let big = fam.top_modulus();
    let alt = |a: &[u64], b: &[u64]| -> u64 {
        let x = character_value(fam, v, &fam.cover_cocycle(a, b));
        let y = character_value(fam, v, &fam.cover_cocycle(b, a));
        (x + big - y) % big
    };
    let scale: Vec<u64> = fam.pair_moduli().iter().map(|&q| big / q).collect();
    let coords: Vec<u64> = fam.pairs().iter().zip(&scale).map(|(&(i, j), &s)| alt(&unit(i), &unit(j)) / s).collect();
    // the f-combination must reproduce the alternation on every basis pair
    for a in 0..t {
        for b in 0..t {
            let lhs = alt(&unit(a), &unit(b));
            let rhs = coords.iter().zip(fam.pairs()).zip(&scale).fold(0u64, |s, ((&c, &(i, j)), &sc)| {
                let w = (u64::from(a == i && b == j) + big - u64::from(a == j && b == i)) % big;
                (s + c * sc % big * w) % big
            });
            if lhs != rhs {
                return Err(Error::Internal("transgressed cocycle is not in the f_ij span".into()));
            }
        }
    }
    Ok(coords)
}

/// Alternation `F(I,J) − F(J,I)` of `F = Σ v_k f_k`, in `Z/P`.
fn alternation(fam: &CentralFamily, v: &[u64], a: &[u64], b: &[u64]) -> u64 {
    character_value(fam, v, &fam.commutator_form(a, b))
}

/// Check record for one class of bicyclic subgroups.
#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    /// Abelian-part coordinates of the generators `(I, J)`.
    pub generators: [Vec<u64>; 2],
    /// Order of `⟨I, J⟩` in the abelian quotient.
    pub image_order: u64,
    pub image_cyclic: bool,
    /// Order of the lifted subgroup `⟨(I;0), (J;0)⟩`.
    pub lifted_order: usize,
    /// `cyclic` when the image is cyclic, otherwise `coboundary`.
    pub route: &'static str,
    /// The alternating form of every image generator vanishes on `(I, J)`.
    pub form_vanishes: bool,
    /// Every image generator restricts to an explicit coboundary.
    pub coboundary_found: bool,
    /// Modulus of the explicit coboundary solve.
    pub solve_modulus: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteB {
    pub pairs_examined: u64,
    pub predicted_pairs: u64,
    pub commuting_pairs: u64,
    /// Distinct subgroups generated by commuting pairs.
    pub classes: usize,
    pub deduplicated: bool,
    pub records: Vec<ClassRecord>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct RouteBOptions {
    /// Keep only maximal subgroups; otherwise check every commuting pair.
    pub dedup: bool,
    pub pair_cap: u64,
    /// Cap on the order of materialized bicyclic subgroups.
    pub table_cap: usize,
}

impl Default for RouteBOptions {
    fn default() -> Self {
        RouteBOptions { dedup: true, pair_cap: DEFAULT_PAIR_CAP, table_cap: 4096 }
    }
}

/// Elements of `⟨a, b⟩` in the abelian quotient as a bitset.
fn span_bits(fam: &CentralFamily, a: &[u64], b: &[u64]) -> Vec<u64> {
    let size = fam.abelian_size() as usize;
    let mut bits = vec![0u64; size.div_ceil(64)];
    let (oa, ob) = (fam.part_order(a), fam.part_order(b));
    let mut x = vec![0u64; a.len()];
    for _ in 0..oa {
        let mut y = x.clone();
        for _ in 0..ob {
            let k = fam.encode(&y) as usize;
            bits[k / 64] |= 1 << (k % 64);
            y = fam.add(&y, b);
        }
        x = fam.add(&x, a);
    }
    bits
}

fn popcount(bits: &[u64]) -> u64 {
    bits.iter().map(|w| w.count_ones() as u64).sum()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Restricts each image generator to `⟨(I; z_I), (J; z_J)⟩` and solves for a
/// coboundary. Central parts are embedded vectors.
pub fn check_class(
    fam: &CentralFamily,
    gens: [(&[u64], &[u64]); 2],
    image: &[Vec<u64>],
    table_cap: usize,
) -> Result<(usize, bool, u64)> {
    let sub =
        fam.closure(&[(gens[0].0.to_vec(), gens[0].1.to_vec()), (gens[1].0.to_vec(), gens[1].1.to_vec())], table_cap)?;
    let order = sub.group.order();
    let base = (order as u64).lcm(&fam.top_modulus());
    let modulus = base.checked_mul(order as u64).ok_or_else(|| Error::SizeCap("coboundary modulus overflow".into()))?;
    let qmods = fam.pair_moduli();
    let mut all = true;
    for v in image {
        let f = Cochain::from_fn2(order, modulus, |x, y| {
            let (a, b) = (&sub.elements[x as usize].0, &sub.elements[y as usize].0);
            fam.pairs().iter().zip(v).zip(qmods).fold(0u64, |s, ((&(i, j), &c), &q)| {
                let val = (q - a[j] * b[i] % q) % q;
                (s + c * val % q * (modulus / q)) % modulus
            })
        });
        if is_coboundary(&sub.group, &f)?.is_none() {
            all = false;
            break;
        }
    }
    Ok((order, all, modulus))
}

pub fn route_b(fam: &CentralFamily, image: &[Vec<u64>], opts: RouteBOptions) -> Result<RouteB> {
    let predicted = predicted_pairs(fam, opts.pair_cap)?;
    let size = fam.abelian_size();
    let per_a: Vec<Vec<(Vec<u64>, u64, u64)>> = (0..size)
        .into_par_iter()
        .map(|ia| {
            let a = fam.decode(ia);
            let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
            let mut out = Vec::new();
            for ib in 0..size {
                let b = fam.decode(ib);
                if !fam.commute(&a, &b) {
                    continue;
                }
                if !opts.dedup {
                    out.push((Vec::new(), ia, ib));
                    continue;
                }
                let key = span_bits(fam, &a, &b);
                if seen.insert(key.clone(), ()).is_none() {
                    out.push((key, ia, ib));
                }
            }
            out
        })
        .collect();
    let commuting: u64 = if opts.dedup {
        (0..size)
            .into_par_iter()
            .map(|ia| {
                let a = fam.decode(ia);
                (0..size).filter(|&ib| fam.commute(&a, &fam.decode(ib))).count() as u64
            })
            .sum()
    } else {
        per_a.iter().map(|v| v.len() as u64).sum()
    };

    let mut reps: Vec<(Vec<u64>, u64, u64)> = Vec::new();
    let classes;
    if opts.dedup {
        let mut first: HashMap<Vec<u64>, usize> = HashMap::new();
        for (key, ia, ib) in per_a.into_iter().flatten() {
            if !first.contains_key(&key) {
                first.insert(key.clone(), reps.len());
                reps.push((key, ia, ib));
            }
        }
        classes = reps.len();
        // keep maximal subgroups, largest first, ties by first occurrence
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&k| (std::cmp::Reverse(popcount(&reps[k].0)), k));
        let mut kept: Vec<usize> = Vec::new();
        for k in order {
            if !kept.iter().any(|&m| subset(&reps[k].0, &reps[m].0)) {
                kept.push(k);
            }
        }
        kept.sort_unstable();
        reps = kept.into_iter().map(|k| reps[k].clone()).collect();
    } else {
        reps = per_a.into_iter().flatten().collect();
        classes = reps.len();
    }

    let zero_c = vec![0u64; fam.pairs().len()];
    let records: Vec<ClassRecord> = reps
        .par_iter()
        .map(|(_, ia, ib)| {
            let (a, b) = (fam.decode(*ia), fam.decode(*ib));
            let image_cyclic = fam.generate_cyclic(&a, &b);
            let image_order = popcount(&span_bits(fam, &a, &b));
            let form_vanishes = image.iter().all(|v| alternation(fam, v, &a, &b) == 0);
            let (lifted_order, coboundary_found, solve_modulus) =
                check_class(fam, [(&a, &zero_c), (&b, &zero_c)], image, opts.table_cap)?;
            if form_vanishes != coboundary_found {
                return Err(Error::Internal(format!(
                    "class ({a:?}, {b:?}): alternating form and explicit solve disagree"
                )));
            }
            Ok(ClassRecord {
                generators: [a, b],
                image_order,
                image_cyclic,
                lifted_order,
                route: if image_cyclic { "cyclic" } else { "coboundary" },
                form_vanishes,
                coboundary_found,
                solve_modulus,
                pass: image_cyclic || coboundary_found,
            })
        })
        .collect::<Result<_>>()?;
    let pass = records.iter().all(|r| r.pass);
    Ok(RouteB {
        pairs_examined: predicted,
        predicted_pairs: predicted,
        commuting_pairs: commuting,
        classes,
        deduplicated: opts.dedup,
        records,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Counterexample,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCertificate {
    pub family: String,
    pub p: u64,
    pub n: u32,
    pub exponents: Vec<u32>,
    pub order_log_p: u32,
    pub order: Option<u128>,
    pub central_part: FinAbGroup,
    pub transgression: Transgression,
    pub five_term: FiveTerm,
    /// Route A: no commuting pair with non-cyclic image.
    pub wedge: WedgeSearch,
    /// Route B: per-class restriction checks.
    pub classes: RouteB,
    pub route_a_pass: bool,
    pub route_b_pass: bool,
    /// Route that certifies the lower bound: `cyclicity`, `coboundary`, or
    /// none.
    pub certified_by: Option<&'static str>,
    pub verdict: Verdict,
}

impl FamilyCertificate {
    pub fn image(&self) -> &FinAbGroup {
        &self.transgression.image
    }
}

/// Both routes are always run; the verdict is `certified` if either passes.
pub fn certify(fam: &CentralFamily, pair_cap: u64) -> Result<FamilyCertificate> {
    let transgression = Transgression::compute(fam)?;
    let five_term = transgression.five_term();
    if !five_term.exact {
        return Err(Error::Internal("five-term orders do not multiply out".into()));
    }
    let wedge = wedge_commuting_search(fam, pair_cap)?;
    let image: Vec<Vec<u64>> = transgression.image_generators.iter().map(|g| g.1.clone()).collect();
    let classes = route_b(fam, &image, RouteBOptions { pair_cap, ..Default::default() })?;
    let route_a_pass = wedge.passed();
    let route_b_pass = classes.pass;
    let certified_by = if route_a_pass {
        Some("cyclicity")
    } else if route_b_pass {
        Some("coboundary")
    } else {
        None
    };
    Ok(FamilyCertificate {
        family: fam.id.clone(),
        p: fam.p,
        n: fam.param,
        exponents: fam.exponents.clone(),
        order_log_p: fam.order_log_p(),
        order: fam.order(),
        central_part: fam.central_invariants().clone(),
        transgression,
        five_term,
        wedge,
        classes,
        route_a_pass,
        route_b_pass,
        verdict: if certified_by.is_some() { Verdict::Certified } else { Verdict::Counterexample },
        certified_by,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_cocycle_values() {
        let f = CentralFamily::schur_cover(2, vec![2, 2]).unwrap();
        assert_eq!(fij_eval(&f, (1, 2), &[1, 0], &[0, 1]), 0);
        assert_eq!(fij_eval(&f, (1, 2), &[0, 1], &[1, 0]), 3);
        assert_eq!(fij_eval(&f, (1, 2), &[0, 0], &[1, 1]), 0);
        assert_eq!(eq8_eval(&f, (1, 2), &[1, 0], &[0, 1], (0, 1, 1, 0)), 3);
    }

    #[test]
    fn cover_has_trivial_image() {
        let f = CentralFamily::schur_cover(3, vec![1, 1, 1]).unwrap();
        let t = Transgression::compute(&f).unwrap();
        assert!(t.image.is_trivial());
        assert_eq!(t.central_characters.invariant_factors, vec![3, 3, 3]);
    }

    #[test]
    fn full_relations_give_full_image() {
        let f = CentralFamily::new("ab", 2, 0, vec![1, 1], vec![vec![1]]).unwrap();
        let t = Transgression::compute(&f).unwrap();
        assert_eq!(t.image.invariant_factors, vec![2]);
        assert!(t.central_characters.is_trivial());
    }

    #[test]
    fn small_family_certificates() {
        let c = certify(&CentralFamily::four_generator(2, 1).unwrap(), DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(c.verdict, Verdict::Certified);
        assert!(c.route_a_pass && c.route_b_pass);
        assert_eq!(c.image().invariant_factors, vec![2]);
        assert_eq!(c.wedge.pairs_examined, 256);
    }
}
