//! JSON curve specification files.
//!
//! ```json
//! { "components": [{"id": "C1", "label": "..."}],
//!   "nodes": [{"id": "n1", "a": {"comp": "C1", "t": "0"}, "b": {"comp": "C2", "t": "1/2"}}] }
//! ```
//!
//! Parameters are `"p/q"` strings, `"inf"`, or `"auto"`. Automatic parameters
//! are distinct small integers drawn from the optional top-level `"seed"`.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BranchPoint, Component, NodalCurve, Node};
use crate::error::{Error, Result, Violation};
use crate::scalar::Param;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub components: Vec<ComponentSpec>,
    pub nodes: Vec<NodeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub a: BranchSpec,
    pub b: BranchSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub comp: String,
    pub t: String,
}

impl CurveSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve spec serializes")
    }

    /// Resolves ids and parameters, then validates.
    pub fn build(&self) -> Result<NodalCurve> {
        let components: Vec<Component> = self
            .components
            .iter()
            .map(|c| Component { id: c.id.clone(), label: c.label.clone().unwrap_or_else(|| c.id.clone()) })
            .collect();
        let index = |node: &str, comp: &str| {
            components.iter().position(|c| c.id == comp).ok_or_else(|| {
                Error::InvalidCurve(vec![Violation::DanglingBranch { node: node.to_string(), component: comp.to_string() }])
            })
        };

        let mut resolved: Vec<[(usize, Option<Param>); 2]> = Vec::with_capacity(self.nodes.len());
        let mut used: Vec<BTreeSet<Param>> = vec![BTreeSet::new(); components.len()];
        for n in &self.nodes {
            let mut pair = [(0, None), (0, None)];
            for (slot, b) in pair.iter_mut().zip([&n.a, &n.b]) {
                let c = index(&n.id, &b.comp)?;
                let p = match b.t.trim() {
                    "auto" => None,
                    t => Some(t.parse::<Param>()?),
                };
                if let Some(p) = &p {
                    used[c].insert(p.clone());
                }
                *slot = (c, p);
            }
            resolved.push(pair);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(0));
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (n, pair) in self.nodes.iter().zip(resolved) {
            let mut branches = pair.map(|(c, p)| (c, p));
            for (c, p) in branches.iter_mut() {
                if p.is_none() {
                    let mut range = 8i64;
                    let fresh = loop {
                        let cand = Param::int(rng.random_range(-range..=range));
                        if !used[*c].contains(&cand) {
                            break cand;
                        }
                        range += 4;
                    };
                    used[*c].insert(fresh.clone());
                    *p = Some(fresh);
                }
            }
            let [(ca, pa), (cb, pb)] = branches;
            nodes.push(Node {
                id: n.id.clone(),
                a: BranchPoint { component: ca, param: pa.unwrap() },
                b: BranchPoint { component: cb, param: pb.unwrap() },
            });
        }
        NodalCurve::new(components, nodes)
    }
}

impl NodalCurve {
    pub fn to_spec(&self) -> CurveSpec {
        let comp_id = |c: usize| self.components()[c].id.clone();
        CurveSpec {
            seed: None,
            components: self
                .components()
                .iter()
                .map(|c| ComponentSpec {
                    id: c.id.clone(),
                    label: (c.label != c.id).then(|| c.label.clone()),
                })
                .collect(),
            nodes: self
                .nodes()
                .iter()
                .map(|n| NodeSpec {
                    id: n.id.clone(),
                    a: BranchSpec { comp: comp_id(n.a.component), t: n.a.param.to_string() },
                    b: BranchSpec { comp: comp_id(n.b.component), t: n.b.param.to_string() },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BINARY3: &str = r#"{
      "components": [{"id": "C1"}, {"id": "C2", "label": "second"}],
      "nodes": [
        {"id": "n1", "a": {"comp": "C1", "t": "0"}, "b": {"comp": "C2", "t": "inf"}},
        {"id": "n2", "a": {"comp": "C1", "t": "1"}, "b": {"comp": "C2", "t": "1/2"}},
        {"id": "n3", "a": {"comp": "C1", "t": "-2"}, "b": {"comp": "C2", "t": "auto"}},
        {"id": "n4", "a": {"comp": "C1", "t": "inf"}, "b": {"comp": "C2", "t": "auto"}}
      ]}"#;

    #[test]
    fn parses_and_round_trips() {
        let spec = CurveSpec::from_json(BINARY3).unwrap();
        let curve = spec.build().unwrap();
        assert_eq!(curve.arithmetic_genus(), 3);
        assert_eq!(curve.components()[1].label, "second");
        let again = curve.to_spec().build().unwrap();
        assert_eq!(again, curve);
    }

    #[test]
    fn auto_is_deterministic() {
        let spec = CurveSpec::from_json(BINARY3).unwrap();
        assert_eq!(spec.build().unwrap(), spec.build().unwrap());
        let mut other = spec.clone();
        other.seed = Some(99);
        let a = spec.build().unwrap();
        let b = other.build().unwrap();
        assert_eq!(a.nodes()[0], b.nodes()[0]);
    }

    #[test]
    fn unknown_component_is_dangling() {
        let bad = BINARY3.replace(r#""comp": "C2", "t": "1/2""#, r#""comp": "C9", "t": "1/2""#);
        let err = CurveSpec::from_json(&bad).unwrap().build().unwrap_err();
        assert!(matches!(err, Error::InvalidCurve(v) if matches!(&v[0], Violation::DanglingBranch { component, .. } if component == "C9")));
    }
}
