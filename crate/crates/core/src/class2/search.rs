//! Exhaustive search for commuting pairs with non-cyclic image.

use rayon::prelude::*;
use serde::Serialize;

use super::CentralFamily;
use crate::{Error, Result};

/// Default cap on the number of ordered pairs examined.
pub const DEFAULT_PAIR_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, Serialize)]
pub struct WedgeSearch {
    /// Ordered pairs examined before stopping.
    pub pairs_examined: u64,
    /// `|A|²`, the size of a complete search.
    pub predicted_pairs: u64,
    /// Lexicographically least commuting pair `(I, J)` generating a
    /// non-cyclic subgroup, if any.
    pub witness: Option<[Vec<u64>; 2]>,
    pub witness_indices: Option<[u64; 2]>,
}

impl WedgeSearch {
    /// No witness: every commuting pair has cyclic image.
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

pub(crate) fn predicted_pairs(fam: &CentralFamily, cap: u64) -> Result<u64> {
    let a = fam.abelian_size();
    match a.checked_mul(a) {
        Some(n) if n <= cap => Ok(n),
        _ => Err(Error::SizeCap(format!("{a}² ordered pairs exceed the pair cap {cap}"))),
    }
}

/// Pairs are ordered by the little-endian index of `I`, then of `J`.
pub fn wedge_commuting_search(fam: &CentralFamily, cap: u64) -> Result<WedgeSearch> {
    let predicted = predicted_pairs(fam, cap)?;
    let size = fam.abelian_size();
    let hit = (0..size).into_par_iter().find_map_first(|ia| {
        let a = fam.decode(ia);
        (0..size).find_map(|ib| {
            let b = fam.decode(ib);
            (fam.commute(&a, &b) && !fam.generate_cyclic(&a, &b)).then_some((ia, ib))
        })
    });
    Ok(match hit {
        Some((ia, ib)) => WedgeSearch {
            pairs_examined: ia * size + ib + 1,
            predicted_pairs: predicted,
            witness: Some([fam.decode(ia), fam.decode(ib)]),
            witness_indices: Some([ia, ib]),
        },
        None => {
            WedgeSearch { pairs_examined: predicted, predicted_pairs: predicted, witness: None, witness_indices: None }
        }
    })
}

/// Same search under the name used for the cyclicity criterion.
pub fn an_cyclic_check(fam: &CentralFamily, cap: u64) -> Result<WedgeSearch> {
    wedge_commuting_search(fam, cap)
}
