//! JSON descriptions of groups and lattices.
//!
//! A [`GroupSpec`] is a tagged object (`"kind"`) that builds either a table
//! group or, for class-2 families, a structural [`CentralFamily`]. Element
//! keys are zero-based indices into the built group: permutation closures
//! are numbered breadth-first from the identity, products put `(a, b)` at
//! `a·|right| + b`, and semidirect products put `(σ, g)` at
//! `σ·|acting| + g`.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::class2::CentralFamily;
use crate::group::{corpus, FiniteGroup, Semidirect, Subgroup, DEFAULT_ORDER_CAP};
use crate::lattice::{GLattice, Mat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    /// Permutations of `{1..degree}` in one-line notation.
    Perm {
        degree: usize,
        gens: Vec<Vec<usize>>,
    },
    /// Multiplication table over `0..n`.
    Table {
        rows: Vec<Vec<usize>>,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    /// `action` maps element keys of `acting` (which must generate it) to
    /// automorphisms of `normal` given as element maps.
    Semidirect {
        normal: Box<GroupSpec>,
        acting: Box<GroupSpec>,
        action: BTreeMap<String, Vec<u32>>,
    },
    SchurCover {
        p: u64,
        exponents: Vec<u32>,
    },
    /// `H` lists central vectors in commutator coordinates `(i, j)`, `i < j`,
    /// ordered lexicographically.
    CentralQuotient {
        cover: Box<GroupSpec>,
        #[serde(rename = "H")]
        h: Vec<Vec<u64>>,
    },
    /// `saltman` and `thm54` take `p` and `n`; any other name is looked up
    /// among the built-in fixtures (`C8`, `D4`, `Q8`, `A4`, ...).
    Named {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<u32>,
    },
}

/// The result of building a spec.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Built {
    Table(FiniteGroup),
    Family(CentralFamily),
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("at {path}: {m}")),
        Error::SizeCap(m) => Error::SizeCap(format!("at {path}: {m}")),
        other => other,
    }
}

/// Fields whose values are nested group specs.
const SPEC_FIELDS: [&str; 6] = ["left", "right", "normal", "acting", "cover", "group"];

/// The deepest nested group spec that fails to deserialize, with its error.
fn locate(v: &Value, path: &str) -> Option<(String, String)> {
    let obj = v.as_object()?;
    for key in SPEC_FIELDS {
        if let Some(child) = obj.get(key) {
            let here = format!("{path}.{key}");
            if let Err(e) = GroupSpec::deserialize(child) {
                return locate(child, &here).or(Some((here, e.to_string())));
            }
        }
    }
    None
}

/// Parses JSON text. Syntax errors carry line and column; structural
/// errors name the JSON path of the offending nested spec.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    T::deserialize(&v).map_err(|e| {
        let (path, msg) = locate(&v, "$").unwrap_or_else(|| ("$".into(), e.to_string()));
        Error::Input(format!("invalid spec at {path}: {msg}"))
    })
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    /// Compact JSON with fields in declaration order; stable across parses.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<Built> {
        self.build_at("$")
    }

    fn build_at(&self, path: &str) -> Result<Built> {
        match self {
            GroupSpec::SchurCover { .. } | GroupSpec::CentralQuotient { .. } => self.family_at(path).map(Built::Family),
            GroupSpec::Named { name, .. } if name == "saltman" || name == "thm54" => {
                self.family_at(path).map(Built::Family)
            }
            _ => self.table_at(path).map(Built::Table),
        }
    }

    /// The group as a multiplication table, materializing families when
    /// their order is within the table cap.
    pub fn table_group(&self) -> Result<FiniteGroup> {
        self.table_at("$")
    }

    fn table_at(&self, path: &str) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Perm { degree, gens } => {
                FiniteGroup::from_permutations(*degree, gens, DEFAULT_ORDER_CAP).map_err(|e| at(path, e))
            }
            GroupSpec::Table { rows } => FiniteGroup::from_table(rows).map_err(|e| at(path, e)),
            GroupSpec::Product { left, right } => {
                let l = left.table_at(&format!("{path}.left"))?;
                let r = right.table_at(&format!("{path}.right"))?;
                FiniteGroup::direct_product(&l, &r).map(|x| x.0).map_err(|e| at(path, e))
            }
            GroupSpec::Semidirect { .. } => self.semidirect_at(path).map(|s| s.2.group),
            GroupSpec::Named { name, p: None, n: None } if name != "saltman" && name != "thm54" => {
                corpus::by_name(name).ok_or_else(|| at(path, Error::Input(format!("unknown group name {name:?}"))))
            }
            _ => {
                let fam = self.family_at(path)?;
                fam.materialize(DEFAULT_ORDER_CAP).map(|m| m.group).map_err(|e| at(path, e))
            }
        }
    }

    /// `(normal, acting, product)` for a `semidirect` spec; the acting group
    /// carries the keys of `action` as its generators.
    pub fn semidirect(&self) -> Result<(FiniteGroup, FiniteGroup, Semidirect)> {
        self.semidirect_at("$")
    }

    fn semidirect_at(&self, path: &str) -> Result<(FiniteGroup, FiniteGroup, Semidirect)> {
        let GroupSpec::Semidirect { normal, acting, action } = self else {
            return Err(at(path, Error::Input("expected a spec of kind semidirect".into())));
        };
        let n = normal.table_at(&format!("{path}.normal"))?;
        let g0 = acting.table_at(&format!("{path}.acting"))?;
        let apath = format!("{path}.action");
        let mut keys = Vec::new();
        let mut tables = Vec::new();
        for (key, t) in action {
            let k: u32 =
                key.parse().map_err(|_| at(&apath, Error::Input(format!("key {key:?} is not an element index"))))?;
            if k as usize >= g0.order() {
                return Err(at(&apath, Error::Input(format!("key {k} is not an element of the acting group"))));
            }
            if k != 0 {
                keys.push(k);
                tables.push(t.clone());
            }
        }
        let g0 = g0
            .with_generators(&keys)
            .map_err(|_| at(&apath, Error::Input("the keys of action do not generate the acting group".into())))?;
        let sd = FiniteGroup::semidirect_product(&n, &g0, &tables).map_err(|e| at(&apath, e))?;
        Ok((n, g0, sd))
    }

    /// The structural family for `schur_cover`, `central_quotient` and the
    /// two named families.
    pub fn family(&self) -> Result<CentralFamily> {
        self.family_at("$")
    }

    fn family_at(&self, path: &str) -> Result<CentralFamily> {
        match self {
            GroupSpec::SchurCover { p, exponents } => {
                CentralFamily::schur_cover(*p, exponents.clone()).map_err(|e| at(path, e))
            }
            GroupSpec::CentralQuotient { cover, h } => {
                let GroupSpec::SchurCover { p, exponents } = cover.as_ref() else {
                    return Err(at(&format!("{path}.cover"), Error::Input("cover must be of kind schur_cover".into())));
                };
                CentralFamily::new("quotient", *p, 0, exponents.clone(), h.clone()).map_err(|e| at(path, e))
            }
            GroupSpec::Named { name, p: Some(p), n: Some(n) } => match name.as_str() {
                "saltman" => CentralFamily::saltman(*p, *n),
                "thm54" => CentralFamily::four_generator(*p, *n),
                other => Err(Error::Input(format!("{other:?} is not a family name (saltman, thm54)"))),
            }
            .map_err(|e| at(path, e)),
            GroupSpec::Named { name, .. } if name == "saltman" || name == "thm54" => {
                Err(at(path, Error::Input(format!("family {name} needs both p and n"))))
            }
            _ => Err(at(path, Error::Input("not a class-2 family spec".into()))),
        }
    }
}

/// A lattice over a group given by a [`GroupSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeSpec {
    Trivial {
        group: GroupSpec,
        rank: usize,
    },
    Regular {
        group: GroupSpec,
    },
    /// `Z[G/K]` for `K` generated by the listed element keys.
    Permutation {
        group: GroupSpec,
        subgroup: Vec<u32>,
    },
    /// Rank one; elements outside the index-2 subgroup generated by `kernel`
    /// act by `−1`.
    Sign {
        group: GroupSpec,
        kernel: Vec<u32>,
    },
    /// One integer matrix per generator of the group, in generator order.
    Matrices {
        group: GroupSpec,
        matrices: Vec<Mat>,
    },
}

impl LatticeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<GLattice> {
        let sub = |g: &FiniteGroup, keys: &[u32]| -> Result<Subgroup> {
            if let Some(k) = keys.iter().find(|&&k| k as usize >= g.order()) {
                return Err(Error::Input(format!("at $.subgroup: {k} is not an element")));
            }
            Ok(g.subgroup_generated(keys))
        };
        match self {
            LatticeSpec::Trivial { group, rank } => Ok(GLattice::trivial(&group.table_group()?, *rank)),
            LatticeSpec::Regular { group } => Ok(GLattice::regular(&group.table_group()?)),
            LatticeSpec::Permutation { group, subgroup } => {
                let g = group.table_group()?;
                GLattice::permutation(&g, &sub(&g, subgroup)?)
            }
            LatticeSpec::Sign { group, kernel } => {
                let g = group.table_group()?;
                GLattice::sign(&g, &sub(&g, kernel)?)
            }
            LatticeSpec::Matrices { group, matrices } => {
                GLattice::from_generator_matrices(&group.table_group()?, matrices)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_from_permutations() {
        let s = GroupSpec::parse(r#"{"kind":"perm","degree":3,"gens":[[2,1,3],[2,3,1]]}"#).unwrap();
        assert_eq!(s.table_group().unwrap().order(), 6);
        assert_eq!(GroupSpec::parse(&s.canonical_json()).unwrap(), s);
    }

    #[test]
    fn rejects_non_bijection_and_unknown_fields() {
        let e = GroupSpec::parse(r#"{"kind":"perm","degree":3,"gens":[[1,1,3]]}"#).unwrap().build().unwrap_err();
        assert!(e.to_string().contains("not a bijection"), "{e}");
        assert!(GroupSpec::parse(r#"{"kind":"perm","degree":3,"gens":[],"extra":1}"#).is_err());
        assert!(GroupSpec::parse(r#"{"kind":"braid","degree":3}"#).is_err());
    }

    #[test]
    fn named_family_and_fixture() {
        let s = GroupSpec::parse(r#"{"kind":"named","name":"saltman","p":2,"n":1}"#).unwrap();
        let Built::Family(f) = s.build().unwrap() else { panic!("expected a family") };
        assert_eq!(f.order(), Some(512));
        let d4 = GroupSpec::Named { name: "D4".into(), p: None, n: None };
        assert_eq!(d4.table_group().unwrap().order(), 8);
        assert_eq!(d4.canonical_json(), r#"{"kind":"named","name":"D4"}"#);
        assert!(GroupSpec::Named { name: "saltman".into(), p: Some(2), n: None }.build().is_err());
    }

    #[test]
    fn semidirect_with_inversion() {
        let text = r#"{"kind":"semidirect","normal":{"kind":"named","name":"C3"},
            "acting":{"kind":"named","name":"C2"},"action":{"1":[0,2,1]}}"#;
        let s = GroupSpec::parse(text).unwrap();
        let (_, _, sd) = s.semidirect().unwrap();
        assert!(!sd.group.is_abelian());
        assert_eq!(GroupSpec::parse(&s.canonical_json()).unwrap(), s);
        let bad = text.replace("[0,2,1]", "[0,1,1]");
        let e = GroupSpec::parse(&bad).unwrap().build().unwrap_err();
        assert!(e.to_string().contains("$.action"), "{e}");
    }

    #[test]
    fn central_quotient_needs_a_cover() {
        let q = r#"{"kind":"central_quotient","cover":{"kind":"schur_cover","p":2,"exponents":[1,1]},"H":[[1]]}"#;
        let s = GroupSpec::parse(q).unwrap();
        assert_eq!(s.table_group().unwrap().order(), 4);
        let bad = q.replace(r#"{"kind":"schur_cover","p":2,"exponents":[1,1]}"#, r#"{"kind":"named","name":"C2"}"#);
        assert!(GroupSpec::parse(&bad).unwrap().build().is_err());
    }

    #[test]
    fn lattice_specs() {
        let l = LatticeSpec::parse(r#"{"kind":"sign","group":{"kind":"named","name":"C2"},"kernel":[]}"#).unwrap();
        assert_eq!(l.build().unwrap().rank(), 1);
        let m = LatticeSpec::parse(
            r#"{"kind":"matrices","group":{"kind":"named","name":"C2"},"matrices":[[[0,1],[1,0]]]}"#,
        )
        .unwrap();
        assert_eq!(m.build().unwrap().rank(), 2);
    }
}
