//! Definition documents: one JSON file naming groups, subgroups,
//! homomorphisms, rules, and automata, fully validated at load time.
//!
//! Every entity is checked against its invariants when it is built (Cayley
//! tables must be groups, image lists must be homomorphisms, tables must
//! have the right length), and every cross-reference must resolve; the
//! first violation is reported with the entity that caused it.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::ca::{Gca, LocalRule};
use crate::config::Alphabet;
use crate::error::{Error, Result};
use crate::groups::{Element, Group, Homomorphism, Subgroup};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    groups: Vec<RawGroup>,
    #[serde(default)]
    subgroups: Vec<RawSubgroup>,
    #[serde(default)]
    homomorphisms: Vec<RawHomomorphism>,
    #[serde(default)]
    rules: Vec<RawRule>,
    #[serde(default)]
    gcas: Vec<RawGca>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    name: String,
    kind: String,
    n: Option<usize>,
    rank: Option<usize>,
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubgroup {
    name: String,
    group: String,
    elements: Option<Vec<usize>>,
    basis: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHomomorphism {
    name: String,
    domain: String,
    codomain: String,
    images: Option<Vec<usize>>,
    matrix: Option<Vec<Vec<i64>>>,
    builtin: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    name: String,
    group: String,
    #[serde(default = "default_q")]
    q: usize,
    #[serde(default)]
    memory: Vec<serde_json::Value>,
    table: Option<Vec<u8>>,
    builtin: Option<String>,
}

fn default_q() -> usize {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGca {
    name: String,
    phi: String,
    rule: String,
}

/// A fully validated definition document.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub groups: BTreeMap<String, Group>,
    pub subgroups: BTreeMap<String, Subgroup>,
    pub homomorphisms: BTreeMap<String, Homomorphism>,
    pub rules: BTreeMap<String, LocalRule>,
    pub gcas: BTreeMap<String, Gca>,
}

fn at(place: String, e: Error) -> Error {
    Error::Parse(format!("{place}: {e}"))
}

impl Workspace {
    pub fn load(path: &std::path::Path) -> Result<Workspace> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Workspace::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Workspace> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut ws = Workspace::default();
        for rg in raw.groups {
            let place = format!("group '{}'", rg.name);
            let group = build_group(&rg).map_err(|e| at(place.clone(), e))?;
            if ws.groups.insert(rg.name.clone(), group).is_some() {
                return Err(Error::Parse(format!("{place}: duplicate name")));
            }
        }
        for rs in raw.subgroups {
            let place = format!("subgroup '{}'", rs.name);
            let parent = ws
                .group(&rs.group)
                .map_err(|e| at(place.clone(), e))?
                .clone();
            let sub = match (&rs.elements, &rs.basis) {
                (Some(els), None) => Subgroup::from_elements(parent, els),
                (None, Some(basis)) => Subgroup::lattice(parent, basis.clone()),
                _ => Err(Error::Parse(
                    "exactly one of 'elements' or 'basis' is required".into(),
                )),
            }
            .map_err(|e| at(place.clone(), e))?;
            if ws.subgroups.insert(rs.name.clone(), sub).is_some() {
                return Err(Error::Parse(format!("{place}: duplicate name")));
            }
        }
        for rh in raw.homomorphisms {
            let place = format!("homomorphism '{}'", rh.name);
            let domain = ws
                .group(&rh.domain)
                .map_err(|e| at(place.clone(), e))?
                .clone();
            let codomain = ws
                .group(&rh.codomain)
                .map_err(|e| at(place.clone(), e))?
                .clone();
            let hom = match (&rh.images, &rh.matrix, rh.builtin.as_deref()) {
                (Some(images), None, None) => {
                    Homomorphism::from_table(domain, codomain, images.clone())
                }
                (None, Some(matrix), None) => {
                    Homomorphism::from_matrix(domain, codomain, matrix.clone())
                }
                (None, None, Some("identity")) => {
                    if domain != codomain {
                        Err(Error::Parse(
                            "identity needs equal domain and codomain".into(),
                        ))
                    } else {
                        Ok(Homomorphism::identity(domain))
                    }
                }
                (None, None, Some("trivial")) => Ok(Homomorphism::trivial(domain, codomain)),
                (None, None, Some(other)) => {
                    Err(Error::Parse(format!("unknown builtin '{other}'")))
                }
                _ => Err(Error::Parse(
                    "exactly one of 'images', 'matrix', or 'builtin' is required".into(),
                )),
            }
            .map_err(|e| at(place.clone(), e))?;
            if ws.homomorphisms.insert(rh.name.clone(), hom).is_some() {
                return Err(Error::Parse(format!("{place}: duplicate name")));
            }
        }
        for rr in raw.rules {
            let place = format!("rule '{}'", rr.name);
            let group = ws
                .group(&rr.group)
                .map_err(|e| at(place.clone(), e))?
                .clone();
            let rule = build_rule(&rr, group).map_err(|e| at(place.clone(), e))?;
            if ws.rules.insert(rr.name.clone(), rule).is_some() {
                return Err(Error::Parse(format!("{place}: duplicate name")));
            }
        }
        for rt in raw.gcas {
            let place = format!("gca '{}'", rt.name);
            let phi = ws
                .homomorphism(&rt.phi)
                .map_err(|e| at(place.clone(), e))?
                .clone();
            let rule = ws.rule(&rt.rule).map_err(|e| at(place.clone(), e))?.clone();
            let gca = Gca::new(phi, rule).map_err(|e| at(place.clone(), e))?;
            if ws.gcas.insert(rt.name.clone(), gca).is_some() {
                return Err(Error::Parse(format!("{place}: duplicate name")));
            }
        }
        Ok(ws)
    }

    pub fn group(&self, name: &str) -> Result<&Group> {
        self.groups
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown group '{name}'")))
    }

    pub fn subgroup(&self, name: &str) -> Result<&Subgroup> {
        self.subgroups
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown subgroup '{name}'")))
    }

    pub fn homomorphism(&self, name: &str) -> Result<&Homomorphism> {
        self.homomorphisms
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown homomorphism '{name}'")))
    }

    pub fn rule(&self, name: &str) -> Result<&LocalRule> {
        self.rules
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown rule '{name}'")))
    }

    pub fn gca(&self, name: &str) -> Result<&Gca> {
        self.gcas
            .get(name)
            .ok_or_else(|| Error::Parse(format!("unknown gca '{name}'")))
    }

    /// Total entity count, used by load diagnostics.
    pub fn len(&self) -> usize {
        self.groups.len()
            + self.subgroups.len()
            + self.homomorphisms.len()
            + self.rules.len()
            + self.gcas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn build_group(rg: &RawGroup) -> Result<Group> {
    match rg.kind.as_str() {
        "cyclic" => {
            let n =
                rg.n.ok_or_else(|| Error::Parse("cyclic group needs 'n'".into()))?;
            Group::cyclic(n)
        }
        "symmetric" => {
            let n =
                rg.n.ok_or_else(|| Error::Parse("symmetric group needs 'n'".into()))?;
            Group::symmetric(n)
        }
        "free-abelian" => {
            let rank = rg
                .rank
                .ok_or_else(|| Error::Parse("free abelian group needs 'rank'".into()))?;
            Ok(Group::free_abelian(rank))
        }
        "cayley" => {
            let table = rg
                .table
                .clone()
                .ok_or_else(|| Error::Parse("cayley group needs 'table'".into()))?;
            Group::from_table(table)
        }
        other => Err(Error::Parse(format!("unknown group kind '{other}'"))),
    }
}

/// Parse a memory element: an index for finite groups, a vector for Z^d.
fn parse_element(group: &Group, v: &serde_json::Value) -> Result<Element> {
    let e = match v {
        serde_json::Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("bad element {n}")))?;
            if group.is_finite() {
                Element::Finite(
                    usize::try_from(i)
                        .map_err(|_| Error::Parse(format!("negative element index {i}")))?,
                )
            } else {
                Element::Free(vec![i])
            }
        }
        serde_json::Value::Array(items) => {
            let coords: Option<Vec<i64>> = items.iter().map(|x| x.as_i64()).collect();
            Element::Free(coords.ok_or_else(|| Error::Parse("bad element vector".into()))?)
        }
        other => return Err(Error::Parse(format!("bad element {other}"))),
    };
    if !group.contains(&e) {
        return Err(Error::Parse(format!("element {e} is not in the group")));
    }
    Ok(e)
}

fn build_rule(rr: &RawRule, group: Group) -> Result<LocalRule> {
    let alphabet = Alphabet::new(rr.q)?;
    let memory: Vec<Element> = rr
        .memory
        .iter()
        .map(|v| parse_element(&group, v))
        .collect::<Result<_>>()?;
    match (&rr.table, rr.builtin.as_deref()) {
        (Some(table), None) => LocalRule::new(group, memory, alphabet, table.clone()),
        (None, Some("identity")) => Ok(LocalRule::identity(group, alphabet)),
        (None, Some("xor")) | (None, Some("sum-mod-q")) => {
            LocalRule::sum_mod_q(group, alphabet, memory)
        }
        (None, Some(spec)) if spec.starts_with("constant:") => {
            let c: u8 = spec["constant:".len()..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad constant in '{spec}'")))?;
            LocalRule::constant(group, alphabet, memory, c)
        }
        (None, Some(spec)) if spec.starts_with("read-at:") => {
            let body = &spec["read-at:".len()..];
            let value: serde_json::Value = if body.contains(',') {
                serde_json::Value::Array(
                    body.split(',')
                        .map(|p| {
                            p.trim()
                                .parse::<i64>()
                                .map(Into::into)
                                .map_err(|_| Error::Parse(format!("bad coordinate in '{spec}'")))
                        })
                        .collect::<Result<_>>()?,
                )
            } else {
                serde_json::Value::Number(
                    body.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad element in '{spec}'")))?
                        .into(),
                )
            };
            let g = parse_element(&group, &value)?;
            LocalRule::read_at(group, alphabet, g)
        }
        (None, Some(other)) => Err(Error::Parse(format!("unknown builtin '{other}'"))),
        _ => Err(Error::Parse(
            "exactly one of 'table' or 'builtin' is required".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_loads() {
        let ws = Workspace::from_json_str(
            r#"{
                "groups": [{"name": "z4", "kind": "cyclic", "n": 4}],
                "rules": [{"name": "xor", "group": "z4", "memory": [0, 1],
                           "builtin": "xor"}]
            }"#,
        )
        .unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws.rule("xor").unwrap().memory().len(), 2);
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let err = Workspace::from_json_str(
            r#"{"groups": [{"name": "bad", "kind": "cayley",
                "table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],
                          [3,2,4,0,1],[4,3,1,2,0]]}]}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad"), "{msg}");
        assert!(msg.contains("associat"), "{msg}");
    }

    #[test]
    fn order_violating_homomorphism_is_rejected() {
        let err = Workspace::from_json_str(
            r#"{
                "groups": [{"name": "z2", "kind": "cyclic", "n": 2},
                           {"name": "z4", "kind": "cyclic", "n": 4}],
                "homomorphisms": [{"name": "bad", "domain": "z2",
                                   "codomain": "z4", "images": [0, 1]}]
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("bad"));
    }

    #[test]
    fn dangling_reference_is_reported() {
        let err = Workspace::from_json_str(
            r#"{"rules": [{"name": "r", "group": "nope", "memory": [0],
                           "builtin": "identity"}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("nope"));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = Workspace::from_json_str(
            r#"{"groups": [{"name": "g", "kind": "cyclic", "n": 2},
                           {"name": "g", "kind": "cyclic", "n": 3}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn full_document_with_gca() {
        let ws = Workspace::from_json_str(
            r#"{
                "groups": [{"name": "z4", "kind": "cyclic", "n": 4},
                           {"name": "z", "kind": "free-abelian", "rank": 1}],
                "subgroups": [{"name": "k", "group": "z4", "elements": [0, 2]},
                              {"name": "even", "group": "z", "basis": [[2]]}],
                "homomorphisms": [{"name": "id4", "domain": "z4",
                                   "codomain": "z4", "builtin": "identity"},
                                  {"name": "dbl", "domain": "z",
                                   "codomain": "z", "matrix": [[2]]}],
                "rules": [{"name": "xor", "group": "z4", "memory": [0, 1],
                           "builtin": "xor"},
                          {"name": "readz", "group": "z",
                           "builtin": "read-at:3"}],
                "gcas": [{"name": "xor4", "phi": "id4", "rule": "xor"}]
            }"#,
        )
        .unwrap();
        assert_eq!(ws.len(), 9);
        assert!(ws.gca("xor4").unwrap().phi().is_endomorphism());
        assert_eq!(
            ws.rule("readz").unwrap().memory(),
            &[Element::Free(vec![3])]
        );
        assert!(ws.subgroup("even").unwrap().lattice_basis().is_some());
    }
}
