//! Multiplication tables for a family group and its subgroups.

use std::collections::HashMap;

use super::CentralFamily;
use crate::group::FiniteGroup;
use crate::{Error, Result};

/// A table group whose elements are `(abelian part; embedded central part)`.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub group: FiniteGroup,
    pub elements: Vec<(Vec<u64>, Vec<u64>)>,
}

impl Materialized {
    pub fn index_of(&self, a: &[u64], z: &[u64]) -> Option<u32> {
        self.elements.iter().position(|(x, y)| x == a && y == z).map(|i| i as u32)
    }
}

impl CentralFamily {
    /// All elements of the central part as canonical embedded vectors,
    /// zero first.
    pub fn central_elements(&self) -> Vec<Vec<u64>> {
        let n = self.pairs().len();
        let mut out = vec![vec![0u64; n]];
        for (ord, g) in self.central_generators() {
            let mut next = Vec::with_capacity(out.len() * *ord as usize);
            for k in 0..*ord {
                for z in &out {
                    let v: Vec<u64> = z.iter().zip(g).map(|(x, y)| (x + k * y) % self.top_modulus()).collect();
                    next.push(self.reduce_central(&v));
                }
            }
            out = next;
        }
        out
    }

    /// The whole group as a table; element `a_index·|Z| + z_index`.
    pub fn materialize(&self, cap: usize) -> Result<Materialized> {
        let order = self.order().filter(|&o| o <= cap as u128).ok_or_else(|| {
            Error::SizeCap(format!("group of order p^{} exceeds the table cap {cap}", self.order_log_p()))
        })? as usize;
        let zs = self.central_elements();
        let nz = zs.len();
        let zindex: HashMap<&[u64], usize> = zs.iter().enumerate().map(|(i, z)| (z.as_slice(), i)).collect();
        let parts: Vec<Vec<u64>> = (0..self.abelian_size()).map(|i| self.decode(i)).collect();
        let mut table = vec![0u32; order * order];
        for (ia, a) in parts.iter().enumerate() {
            for (ib, b) in parts.iter().enumerate() {
                let e = self.embed(&self.cover_cocycle(a, b));
                let ab = self.encode(&self.add(a, b)) as usize;
                for (iz, z) in zs.iter().enumerate() {
                    for (iw, w) in zs.iter().enumerate() {
                        let c: Vec<u64> =
                            z.iter().zip(w).zip(&e).map(|((x, y), r)| (x + y + r) % self.top_modulus()).collect();
                        let zc = zindex[self.reduce_central(&c).as_slice()];
                        table[(ia * nz + iz) * order + ib * nz + iw] = (ab * nz + zc) as u32;
                    }
                }
            }
        }
        let gens: Vec<u32> = (0..self.rank())
            .map(|k| {
                let mut a = vec![0u64; self.rank()];
                a[k] = 1;
                (self.encode(&a) as usize * nz) as u32
            })
            .collect();
        let mut elements = Vec::with_capacity(order);
        for a in &parts {
            for z in &zs {
                elements.push((a.clone(), z.clone()));
            }
        }
        Ok(Materialized { group: FiniteGroup::from_raw(order, table, gens), elements })
    }

    /// The subgroup generated by the given elements, as a table.
    pub fn closure(&self, gens: &[(Vec<u64>, Vec<u64>)], cap: usize) -> Result<Materialized> {
        let zero = (vec![0u64; self.rank()], vec![0u64; self.pairs().len()]);
        let mut elements = vec![zero];
        let mut index: HashMap<(Vec<u64>, Vec<u64>), u32> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let gens: Vec<(Vec<u64>, Vec<u64>)> = gens
            .iter()
            .map(|(a, z)| (a.iter().zip(self.part_moduli()).map(|(x, q)| x % q).collect(), self.reduce_central(z)))
            .collect();
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let (a, z) = &elements[i];
                let prod = self.mul((a, z), (&g.0, &g.1));
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::SizeCap(format!("subgroup exceeds {cap} elements")));
                    }
                    index.insert(prod.clone(), elements.len() as u32);
                    elements.push(prod);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                table[i * n + j] = index[&self.mul((&x.0, &x.1), (&y.0, &y.1))];
            }
        }
        let gen_idx: Vec<u32> = gens.iter().map(|g| index[g]).collect();
        Ok(Materialized { group: FiniteGroup::from_raw(n, table, gen_idx), elements })
    }
}
