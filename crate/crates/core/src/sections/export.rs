//! Exact JSON form of a section basis. Scalars are `"p/q"` strings, so a
//! parse of the export reproduces every coefficient bit for bit.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{BundleSpec, Section, SectionBasis, TwistDivisor, TwistPoint};
use crate::curve::{NodalCurve, Subcurve};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{format_scalar, parse_scalar, Param};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExport {
    pub subcurve: Vec<String>,
    pub k: i64,
    pub twist: Vec<TwistExport>,
    pub frames: Vec<FrameExport>,
    pub h0: usize,
    pub h1: i64,
    pub sections: Vec<SectionExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistExport {
    pub comp: String,
    pub t: String,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameExport {
    pub comp: String,
    pub poles: Vec<PoleExport>,
    pub degree_bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleExport {
    pub t: String,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionExport {
    pub numerators: Vec<NumeratorExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumeratorExport {
    pub comp: String,
    /// Low degree first.
    pub coeffs: Vec<String>,
}

impl TwistDivisor {
    pub fn export(&self, curve: &NodalCurve) -> Vec<TwistExport> {
        self.points()
            .iter()
            .map(|p| TwistExport {
                comp: curve.components()[p.component].id.clone(),
                t: p.param.to_string(),
                mult: p.mult,
            })
            .collect()
    }
}

impl SectionBasis {
    pub fn export(&self) -> BasisExport {
        let curve = self.bundle.curve();
        let id = |c: usize| curve.components()[c].id.clone();
        BasisExport {
            subcurve: self.bundle.z.ids(),
            k: self.bundle.k,
            twist: self.bundle.twist.export(curve),
            frames: self
                .frames
                .iter()
                .map(|f| FrameExport {
                    comp: id(f.component),
                    poles: f.poles.iter().map(|(p, e)| PoleExport { t: p.to_string(), order: *e }).collect(),
                    degree_bound: f.degree_bound,
                })
                .collect(),
            h0: self.h0(),
            h1: self.h1(),
            sections: self
                .sections
                .iter()
                .map(|s| SectionExport {
                    numerators: s
                        .numerators
                        .iter()
                        .zip(&self.frames)
                        .map(|(f, fr)| NumeratorExport {
                            comp: id(fr.component),
                            coeffs: f.coeffs().iter().map(format_scalar).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.export()).expect("basis export serializes")
    }
}

impl BasisExport {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rebuilds the bundle and the sections on `curve`.
    pub fn import(&self, curve: &Arc<NodalCurve>) -> Result<(BundleSpec, Vec<Section>)> {
        let ids: Vec<&str> = self.subcurve.iter().map(String::as_str).collect();
        let z = Subcurve::from_ids(curve.clone(), &ids)?;
        let comp = |id: &str| {
            curve.component_index(id).ok_or_else(|| Error::Parse(format!("unknown component {id}")))
        };
        let twist = self
            .twist
            .iter()
            .map(|t| Ok(TwistPoint { component: comp(&t.comp)?, param: t.t.parse::<Param>()?, mult: t.mult }))
            .collect::<Result<Vec<_>>>()?;
        let bundle = BundleSpec::new(z, self.k, TwistDivisor::new(twist))?;
        let sections = self
            .sections
            .iter()
            .map(|s| {
                let numerators = s
                    .numerators
                    .iter()
                    .map(|n| Ok(Poly::new(n.coeffs.iter().map(|c| parse_scalar(c)).collect::<Result<Vec<_>>>()?)))
                    .collect::<Result<Vec<_>>>()?;
                if numerators.len() != bundle.z.members().len() {
                    return Err(Error::Parse("numerator count does not match the subcurve".into()));
                }
                Ok(Section { numerators })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((bundle, sections))
    }
}
