//! Hypothesis ⇒ conclusion checks over curve corpora, with JSON reports.

mod context;
pub mod corpus;
mod statements;
#[cfg(test)]
mod tests;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::curve::{BranchPoint, CurveSpec, DecompositionSummary, NodalCurve, Subcurve, DEFAULT_ENUMERATION_BOUND};
use crate::error::{Error, Result};
use crate::geometry::{curve_hash, PointRecord};
use crate::par::{self, Execution};
use crate::sections::{BundleSpec, TwistDivisor, TwistExport};

pub use context::CurveContext;
pub use corpus::{generate, CorpusCurve, CorpusSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Statement {
    PropQuad,
    ThmMain,
    LemRho,
    LemA1,
    #[serde(rename = "LEM_3CONN")]
    Lem3conn,
    LemBnormgen,
    ThmTeo2,
    PropProp1,
    CorHypi,
    LemPencil,
    PropGoodsec,
    PropKnorm,
    PropKge4,
    LemA2,
    #[serde(rename = "COR_2COMP")]
    Cor2comp,
    #[serde(rename = "COR_3CONN")]
    Cor3conn,
    ThmSchreyer,
    #[serde(rename = "EX_4COMP")]
    Ex4comp,
    FranGate,
}

impl Statement {
    pub const ALL: [Statement; 19] = [
        Statement::PropQuad,
        Statement::ThmMain,
        Statement::LemRho,
        Statement::LemA1,
        Statement::Lem3conn,
        Statement::LemBnormgen,
        Statement::ThmTeo2,
        Statement::PropProp1,
        Statement::CorHypi,
        Statement::LemPencil,
        Statement::PropGoodsec,
        Statement::PropKnorm,
        Statement::PropKge4,
        Statement::LemA2,
        Statement::Cor2comp,
        Statement::Cor3conn,
        Statement::ThmSchreyer,
        Statement::Ex4comp,
        Statement::FranGate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statement::PropQuad => "PROP_QUAD",
            Statement::ThmMain => "THM_MAIN",
            Statement::LemRho => "LEM_RHO",
            Statement::LemA1 => "LEM_A1",
            Statement::Lem3conn => "LEM_3CONN",
            Statement::LemBnormgen => "LEM_BNORMGEN",
            Statement::ThmTeo2 => "THM_TEO2",
            Statement::PropProp1 => "PROP_PROP1",
            Statement::CorHypi => "COR_HYPI",
            Statement::LemPencil => "LEM_PENCIL",
            Statement::PropGoodsec => "PROP_GOODSEC",
            Statement::PropKnorm => "PROP_KNORM",
            Statement::PropKge4 => "PROP_KGE4",
            Statement::LemA2 => "LEM_A2",
            Statement::Cor2comp => "COR_2COMP",
            Statement::Cor3conn => "COR_3CONN",
            Statement::ThmSchreyer => "THM_SCHREYER",
            Statement::Ex4comp => "EX_4COMP",
            Statement::FranGate => "FRAN_GATE",
        }
    }

    /// Statements whose confirmations count as substantive normality evidence.
    pub fn is_normality_core(self) -> bool {
        matches!(self, Statement::ThmMain | Statement::PropQuad | Statement::PropKnorm | Statement::PropKge4)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown statement {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "confirmed")]
    Confirmed,
    #[serde(rename = "hypothesis_not_met")]
    HypothesisNotMet,
    #[serde(rename = "VIOLATION")]
    Violation,
    /// A measurement could not be completed (for example an enumeration bound).
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// A named boolean together with the quantities it was decided from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub measured: serde_json::Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub family: String,
    pub index: usize,
    pub label: String,
    pub curve_hash: String,
    pub genus: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcurve: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<TwistExport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secant: Option<Vec<PointRecord>>,
    /// Full curve description, attached to violations and inconclusive runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<CurveSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: Statement,
    pub instance: InstanceRecord,
    pub hypotheses: Vec<Check>,
    pub conclusion: Vec<Check>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Certificate {
    pub fn is_substantive(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }
}

/// What a single statement check is applied to, beyond the curve itself.
#[derive(Clone, Debug, Default)]
pub struct Variant {
    /// The subcurve `A` of a splitting `X = A ∪ B`.
    pub decomposition: Option<Subcurve>,
    /// A connected subcurve for statements about a curve `Z` or `A`.
    pub subcurve: Option<Subcurve>,
    pub divisor: Option<TwistDivisor>,
    pub bundle: Option<BundleSpec>,
    pub k: Option<usize>,
    pub secant: Option<Vec<BranchPoint>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub k_max: usize,
    pub samples: usize,
    pub secant_budget: usize,
    pub divisor_degrees: Vec<usize>,
    /// Maximum number of splittings per curve (`None`: all).
    pub decomposition_cap: Option<usize>,
    /// Proper subcurves used for divisor statements, besides the whole curve.
    pub subcurve_cap: usize,
    pub bound: usize,
    pub seed: u64,
    pub modp: Option<u64>,
    pub timings: bool,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            k_max: 5,
            samples: 24,
            secant_budget: 200,
            divisor_degrees: vec![2, 3, 4],
            decomposition_cap: None,
            subcurve_cap: 4,
            bound: DEFAULT_ENUMERATION_BOUND,
            seed: 0,
            modp: None,
            timings: false,
            exec: Execution::default(),
        }
    }
}

/// Running tally of exact ranks re-derived modulo a prime.
#[derive(Debug)]
pub struct ModpTally {
    pub prime: u64,
    checked: AtomicUsize,
    agreed: AtomicUsize,
}

impl ModpTally {
    pub fn new(prime: u64) -> Self {
        ModpTally { prime, checked: AtomicUsize::new(0), agreed: AtomicUsize::new(0) }
    }

    pub fn record(&self, map: &crate::sections::LinearMap) {
        self.checked.fetch_add(1, Ordering::Relaxed);
        if map.rank_mod(self.prime) == Some(map.rank()) {
            self.agreed.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn summary(&self) -> ModpSummary {
        ModpSummary {
            prime: self.prime,
            ranks_checked: self.checked.load(Ordering::Relaxed),
            ranks_agreed: self.agreed.load(Ordering::Relaxed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpSummary {
    pub prime: u64,
    pub ranks_checked: usize,
    pub ranks_agreed: usize,
}

/// Checks one statement on one curve with explicit instance data.
pub fn verify(statement: Statement, curve: &Arc<NodalCurve>, variant: &Variant, cfg: &VerifyConfig) -> Certificate {
    let ctx = CurveContext::new(curve.clone(), "spec", 0, "spec", cfg, None);
    run_one(&ctx, statement, variant)
}

/// Checks one statement on every instance the corpus strategy generates for `curve`.
pub fn verify_all(statement: Statement, curve: &Arc<NodalCurve>, cfg: &VerifyConfig) -> Vec<Certificate> {
    let ctx = CurveContext::new(curve.clone(), "spec", 0, "spec", cfg, None);
    statements::variants(&ctx, statement).iter().map(|v| run_one(&ctx, statement, v)).collect()
}

fn run_one(ctx: &CurveContext, statement: Statement, variant: &Variant) -> Certificate {
    let start = Instant::now();
    let mut cert = statements::check(ctx, statement, variant);
    if ctx.cfg.timings {
        cert.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    if matches!(cert.verdict, Verdict::Violation | Verdict::Inconclusive) {
        cert.instance.spec = Some(ctx.curve.to_spec());
    }
    cert
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementCounts {
    pub statement: String,
    pub confirmed: usize,
    pub hypothesis_not_met: usize,
    pub violation: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub certificates: usize,
    pub confirmed: usize,
    pub hypothesis_not_met: usize,
    pub violations: usize,
    pub inconclusive: usize,
    /// Confirmations of THM_MAIN, PROP_QUAD, PROP_KNORM and PROP_KGE4.
    pub substantive_normality: usize,
    pub by_statement: Vec<StatementCounts>,
}

impl Summary {
    pub fn of(certs: &[Certificate], instances: usize, statements: &[Statement]) -> Self {
        let mut s = Summary { instances, certificates: certs.len(), ..Default::default() };
        s.by_statement = statements
            .iter()
            .map(|st| StatementCounts { statement: st.name().to_string(), ..Default::default() })
            .collect();
        for c in certs {
            let row = statements.iter().position(|&st| st == c.statement).map(|i| &mut s.by_statement[i]);
            let (total, per): (&mut usize, Option<&mut usize>) = match c.verdict {
                Verdict::Confirmed => (&mut s.confirmed, row.map(|r| &mut r.confirmed)),
                Verdict::HypothesisNotMet => (&mut s.hypothesis_not_met, row.map(|r| &mut r.hypothesis_not_met)),
                Verdict::Violation => (&mut s.violations, row.map(|r| &mut r.violation)),
                Verdict::Inconclusive => (&mut s.inconclusive, row.map(|r| &mut r.inconclusive)),
            };
            *total += 1;
            if let Some(p) = per {
                *p += 1;
            }
            if c.verdict == Verdict::Confirmed && c.statement.is_normality_core() {
                s.substantive_normality += 1;
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub family: String,
    pub index: usize,
    pub label: String,
    pub genus: i64,
    pub components: usize,
    pub nodes: usize,
    pub spec: CurveSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: VerifyConfig,
    pub corpus: Vec<CorpusSpec>,
    pub statements: Vec<Statement>,
    pub instances: Vec<InstanceInfo>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modp: Option<ModpSummary>,
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn empty(cfg: &VerifyConfig) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: cfg.clone(),
            corpus: Vec::new(),
            statements: Vec::new(),
            instances: Vec::new(),
            summary: Summary::default(),
            modp: None,
            certificates: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Generates every family, checks every statement on every instance and
/// merges the certificates in (family, index, statement) order.
pub fn run_corpus(corpus: &[CorpusSpec], statements: &[Statement], cfg: &VerifyConfig) -> Result<Report> {
    let mut curves = Vec::new();
    for spec in corpus {
        curves.extend(generate(spec, cfg.seed)?);
    }
    let tally = cfg.modp.map(ModpTally::new);
    let per_curve: Vec<Vec<Certificate>> = par::map(cfg.exec, &curves, |cc| {
        let ctx = CurveContext::new(cc.curve.clone(), &cc.family, cc.index, &cc.label, cfg, tally.as_ref());
        let mut out = Vec::new();
        for &st in statements {
            for v in statements::variants(&ctx, st) {
                out.push(run_one(&ctx, st, &v));
            }
        }
        out
    });
    let certificates: Vec<Certificate> = per_curve.into_iter().flatten().collect();
    let instances = curves
        .iter()
        .map(|c| InstanceInfo {
            family: c.family.clone(),
            index: c.index,
            label: c.label.clone(),
            genus: c.curve.arithmetic_genus(),
            components: c.curve.num_components(),
            nodes: c.curve.nodes().len(),
            spec: c.curve.to_spec(),
        })
        .collect::<Vec<_>>();
    Ok(Report {
        summary: Summary::of(&certificates, instances.len(), statements),
        corpus: corpus.to_vec(),
        statements: statements.to_vec(),
        instances,
        modp: tally.map(|t| t.summary()),
        certificates,
        ..Report::empty(cfg)
    })
}

/// Writes the report as pretty JSON.
pub fn emit_report(report: &Report, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, report.to_json())?;
    Ok(())
}

fn hex(h: u64) -> String {
    format!("{h:016x}")
}

pub(crate) fn base_record(ctx: &CurveContext) -> InstanceRecord {
    InstanceRecord {
        family: ctx.family.clone(),
        index: ctx.index,
        label: ctx.label.clone(),
        curve_hash: hex(curve_hash(&ctx.curve)),
        genus: ctx.genus,
        ..Default::default()
    }
}
