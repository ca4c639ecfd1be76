//! Geometry of the canonical map: very ampleness probes and secants.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curve::{self, BranchPoint, NodalCurve, DEFAULT_ENUMERATION_BOUND};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::par::{self, Execution};
use crate::scalar::{Param, Scalar};
use crate::sections::{global_generation_check, sections_basis, BaseLocus, BundleSpec, Functional, SectionBasis, TwistDivisor};

/// Stable 64-bit digest of a curve's JSON description.
pub fn curve_hash(curve: &NodalCurve) -> u64 {
    let json = serde_json::to_string(&curve.to_spec()).expect("curve spec serializes");
    let digest = Sha256::digest(json.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Seed for stream `stream` of the sampler attached to `(seed, curve)`.
pub fn stream_seed(seed: u64, curve_hash: u64, stream: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(curve_hash.to_le_bytes());
    h.update(stream.to_le_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().unwrap())
}

/// Deterministic source of smooth points with small integer parameters.
pub struct PointSampler<'a> {
    curve: &'a NodalCurve,
    rng: ChaCha8Rng,
    range: i64,
}

impl<'a> PointSampler<'a> {
    pub fn new(curve: &'a NodalCurve, seed: u64, stream: u64) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, curve_hash(curve), stream));
        PointSampler { curve, rng, range: 12 }
    }

    /// A smooth point on component `c`.
    pub fn point_on(&mut self, c: usize, avoid: &BTreeSet<BranchPoint>) -> BranchPoint {
        loop {
            let p = BranchPoint { component: c, param: Param::int(self.rng.random_range(-self.range..=self.range)) };
            if !self.curve.is_branch_point(c, &p.param) && !avoid.contains(&p) {
                return p;
            }
            self.range += 1;
        }
    }

    /// `n` distinct smooth points on uniformly chosen components among `members`.
    pub fn distinct_points(&mut self, members: &[usize], n: usize) -> Vec<BranchPoint> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let c = members[self.rng.random_range(0..members.len())];
            let p = self.point_on(c, &seen);
            seen.insert(p.clone());
            out.push(p);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct AmpleConfig {
    pub samples: usize,
    pub seed: u64,
    pub bound: usize,
    pub exec: Execution,
}

impl Default for AmpleConfig {
    fn default() -> Self {
        AmpleConfig { samples: 24, seed: 0, bound: DEFAULT_ENUMERATION_BOUND, exec: Execution::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Verified,
    Refuted,
    VerifiedOnSample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeTest {
    pub node: String,
    pub rank: usize,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub total: usize,
}

/// A point of the curve as reported in witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Site {
    Node { node: String },
    Smooth { component: String, t: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmpleWitness {
    /// `U ∩ V` of degree at most 2 imposing fewer than `delta` conditions.
    LowDegreeIntersection { u: Vec<String>, v: Vec<String>, nodes: Vec<String>, delta: usize, rank: usize },
    /// Tangent directions at a node are not separated.
    Node { node: String, rank: usize },
    /// Two points with proportional images.
    Pair { a: Site, b: Site },
    /// Differential fails to be injective at a smooth point.
    Tangent { at: Site },
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplenessVerdict {
    pub three_connected: bool,
    pub connectivity: Option<usize>,
    pub node_tests: Vec<NodeTest>,
    pub pair_separation: Tally,
    pub tangent_separation: Tally,
    pub samples: Vec<Site>,
    pub overall: Overall,
    pub witness: Option<AmpleWitness>,
}

impl AmplenessVerdict {
    pub fn is_refuted(&self) -> bool {
        self.overall == Overall::Refuted
    }
}

fn site_of(curve: &NodalCurve, p: &BranchPoint) -> Site {
    Site::Smooth { component: curve.components()[p.component].id.clone(), t: p.param.to_string() }
}

fn row(basis: &SectionBasis, f: Functional) -> Vec<Scalar> {
    basis.sections.iter().map(|s| f.apply(basis, s)).collect()
}

/// Rank of at most two rows, by 2x2 minors.
fn rank2(u: &[Scalar], v: &[Scalar]) -> usize {
    use num_traits::Zero;
    let nz_u = u.iter().any(|x| !x.is_zero());
    let nz_v = v.iter().any(|x| !x.is_zero());
    if !nz_u && !nz_v {
        return 0;
    }
    if !nz_u || !nz_v {
        return 1;
    }
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if !(&u[i] * &v[j] - &u[j] * &v[i]).is_zero() {
                return 2;
            }
        }
    }
    1
}

/// Very ampleness of `|ω_X|`: exact at nodes, sampled elsewhere.
pub fn very_ample_check(curve: &Arc<NodalCurve>, cfg: &AmpleConfig) -> Result<AmplenessVerdict> {
    let basis = sections_basis(&BundleSpec::canonical_power(curve, 1))?;
    very_ample_check_with(&basis, cfg)
}

/// As [`very_ample_check`] for a precomputed basis of a bundle on the whole curve.
pub fn very_ample_check_with(basis: &SectionBasis, cfg: &AmpleConfig) -> Result<AmplenessVerdict> {
    if !basis.bundle.z.is_whole() {
        return Err(Error::BadParameters("very ampleness is tested on the whole curve".into()));
    }
    if basis.h0() < 3 {
        return Err(Error::TooFewSections(basis.h0()));
    }
    let curve = basis.bundle.curve().clone();
    let conn = curve::connectivity(&curve, cfg.bound, cfg.exec)?;
    let three_connected = conn.m_max.is_none_or(|m| m >= 3);
    let node_value = |i: usize| row(basis, Functional::value_at(&curve.nodes()[i].a));

    let mut witness = None;
    if let (false, Some(d)) = (three_connected, &conn.witness) {
        let rows: Vec<Vec<Scalar>> = d.boundary.iter().map(|&i| node_value(i)).collect();
        let rank = Matrix::from_rows(rows, basis.h0()).rank();
        witness = Some(AmpleWitness::LowDegreeIntersection {
            u: d.u.ids(),
            v: d.v.ids(),
            nodes: d.boundary.iter().map(|&i| curve.nodes()[i].id.clone()).collect(),
            delta: d.delta,
            rank,
        });
    }

    let node_tests: Vec<NodeTest> = par::map_range(cfg.exec, curve.nodes().len(), |i| {
        let n = &curve.nodes()[i];
        let rows = vec![node_value(i), row(basis, Functional::derivative_at(&n.a)), row(basis, Functional::derivative_at(&n.b))];
        let rank = Matrix::from_rows(rows, basis.h0()).rank();
        NodeTest { node: n.id.clone(), rank, pass: rank == 3 }
    });
    if witness.is_none() {
        if let Some(t) = node_tests.iter().find(|t| !t.pass) {
            witness = Some(AmpleWitness::Node { node: t.node.clone(), rank: t.rank });
        }
    }

    let mut sampler = PointSampler::new(&curve, cfg.seed, 0);
    let members: Vec<usize> = (0..curve.num_components()).collect();
    let samples = sampler.distinct_points(&members, cfg.samples);
    let mut sites: Vec<(Site, Vec<Scalar>)> =
        (0..curve.nodes().len()).map(|i| (Site::Node { node: curve.nodes()[i].id.clone() }, node_value(i))).collect();
    let derivs: Vec<Vec<Scalar>> = samples.iter().map(|p| row(basis, Functional::derivative_at(p))).collect();
    for p in &samples {
        sites.push((site_of(&curve, p), row(basis, Functional::value_at(p))));
    }

    let pairs: Vec<(usize, usize)> = (0..sites.len()).flat_map(|i| (i + 1..sites.len()).map(move |j| (i, j))).collect();
    let pair_ok = par::map(cfg.exec, &pairs, |&(i, j)| rank2(&sites[i].1, &sites[j].1) == 2);
    let pair_separation = Tally { passed: pair_ok.iter().filter(|&&b| b).count(), total: pairs.len() };
    if witness.is_none() {
        if let Some(k) = pair_ok.iter().position(|&b| !b) {
            let (i, j) = pairs[k];
            witness = Some(AmpleWitness::Pair { a: sites[i].0.clone(), b: sites[j].0.clone() });
        }
    }

    let offset = curve.nodes().len();
    let tangent_ok: Vec<bool> = (0..samples.len()).map(|i| rank2(&sites[offset + i].1, &derivs[i]) == 2).collect();
    let tangent_separation = Tally { passed: tangent_ok.iter().filter(|&&b| b).count(), total: samples.len() };
    if witness.is_none() {
        if let Some(i) = tangent_ok.iter().position(|&b| !b) {
            witness = Some(AmpleWitness::Tangent { at: sites[offset + i].0.clone() });
        }
    }

    let overall = if witness.is_some() { Overall::Refuted } else { Overall::VerifiedOnSample };
    Ok(AmplenessVerdict {
        three_connected,
        connectivity: conn.m_max,
        node_tests,
        pair_separation,
        tangent_separation,
        samples: samples.iter().map(|p| site_of(&curve, p)).collect(),
        overall,
        witness,
    })
}

fn validate_points(curve: &NodalCurve, points: &[BranchPoint]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in points {
        if p.component >= curve.num_components() {
            return Err(Error::BadParameters(format!("component index {} out of range", p.component)));
        }
        if curve.is_branch_point(p.component, &p.param) {
            return Err(Error::BadParameters(format!("{} on {} is a node branch", p.param, curve.components()[p.component].id)));
        }
        if !seen.insert(p.clone()) {
            return Err(Error::BadParameters("secant points must be distinct".into()));
        }
    }
    Ok(())
}

/// A secant point with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub comp: String,
    pub t: String,
}

impl PointRecord {
    pub fn of(curve: &NodalCurve, p: &BranchPoint) -> Self {
        PointRecord { comp: curve.components()[p.component].id.clone(), t: p.param.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecantKind {
    Simple,
    Good,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecantFailure {
    /// The points do not span a linear space of the expected dimension.
    SpanDeficient,
    /// `h0(ω(-S)) ≠ 2`.
    PencilDimension,
    /// The span meets the curve outside `S` (or with multiplicity).
    ExtraIntersection,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecantCandidate {
    pub kind: SecantKind,
    pub points: Vec<PointRecord>,
    #[serde(skip)]
    pub coords: Vec<BranchPoint>,
    pub span_rank: usize,
    pub pencil_h0: usize,
    pub base_locus: Option<BaseLocus>,
    pub failure: Option<SecantFailure>,
}

impl SecantCandidate {
    pub fn accepted(&self) -> bool {
        self.failure.is_none()
    }
}

/// Simple-secant conditions for `points` against the canonical system.
pub fn check_simple_secant(canonical: &SectionBasis, points: &[BranchPoint]) -> Result<SecantCandidate> {
    let curve = canonical.bundle.curve().clone();
    validate_points(&curve, points)?;
    let rows: Vec<Vec<Scalar>> = points.iter().map(|p| row(canonical, Functional::value_at(p))).collect();
    let span_rank = Matrix::from_rows(rows, canonical.h0()).rank();
    let pencil = sections_basis(&canonical.bundle.twisted(&TwistDivisor::sum_of(points).neg())?)?;
    let mut cand = SecantCandidate {
        kind: SecantKind::Simple,
        points: points.iter().map(|p| PointRecord::of(&curve, p)).collect(),
        coords: points.to_vec(),
        span_rank,
        pencil_h0: pencil.h0(),
        base_locus: None,
        failure: None,
    };
    if span_rank != points.len() {
        cand.failure = Some(SecantFailure::SpanDeficient);
    } else if pencil.h0() != 2 {
        cand.failure = Some(SecantFailure::PencilDimension);
    } else {
        let locus = global_generation_check(&pencil)?;
        if !locus.is_empty() {
            cand.failure = Some(SecantFailure::ExtraIntersection);
        }
        cand.base_locus = Some(locus);
    }
    Ok(cand)
}

#[derive(Clone, Debug)]
pub struct SecantConfig {
    pub budget: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SecantConfig {
    fn default() -> Self {
        SecantConfig { budget: 200, seed: 0, exec: Execution::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SecantSearch {
    pub budget: usize,
    pub seed: u64,
    /// Index of the accepted trial.
    pub trial: Option<usize>,
    pub found: Option<SecantCandidate>,
}

/// Points for trial `trial`; stream 0 is reserved for ampleness samples.
pub fn secant_trial_points(curve: &NodalCurve, seed: u64, trial: usize, n: usize) -> Vec<BranchPoint> {
    let members: Vec<usize> = (0..curve.num_components()).collect();
    PointSampler::new(curve, seed, trial as u64 + 1).distinct_points(&members, n)
}

/// Seeded search for a simple `(g-2)`-secant. A miss within the budget is not a disproof.
pub fn simple_secant_search(canonical: &SectionBasis, cfg: &SecantConfig) -> Result<SecantSearch> {
    let curve = canonical.bundle.curve().clone();
    let g = curve.arithmetic_genus();
    if !canonical.bundle.z.is_whole() || canonical.bundle.k != 1 || !canonical.bundle.twist.is_zero() {
        return Err(Error::BadParameters("secant search needs the canonical system of the whole curve".into()));
    }
    if g < 4 {
        return Err(Error::BadParameters(format!("simple (g-2)-secants are searched for g ≥ 4, got {g}")));
    }
    let n = (g - 2) as usize;
    let hit = par::find_first(cfg.exec, cfg.budget, 16, |t| {
        let pts = secant_trial_points(&curve, cfg.seed, t, n);
        check_simple_secant(canonical, &pts).ok().filter(SecantCandidate::accepted)
    });
    Ok(SecantSearch {
        budget: cfg.budget,
        seed: cfg.seed,
        trial: hit.as_ref().map(|(t, _)| *t),
        found: hit.map(|(_, c)| c),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GoodSecantFailure {
    PencilDimension,
    NotGloballyGenerated,
    NotEmbedded,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodSecantCheck {
    pub r: usize,
    pub pencil_h0: usize,
    pub base_locus: Option<BaseLocus>,
    /// Value-plus-derivative rank at each point (2 means embedded there).
    pub embedding_ranks: Vec<usize>,
    /// Birationality of `h_R` is an assumption, never decided here.
    pub birational_assumed: bool,
    pub failure: Option<GoodSecantFailure>,
    pub failing_point: Option<PointRecord>,
}

impl GoodSecantCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Good `(r-1)`-secant conditions for `s` with respect to `r_basis`, checked in order.
pub fn good_secant_check(r_basis: &SectionBasis, s: &[BranchPoint]) -> Result<GoodSecantCheck> {
    let curve = r_basis.bundle.curve().clone();
    let r = r_basis.h0().saturating_sub(1);
    if s.len() + 1 != r {
        return Err(Error::WrongCardinality { expected: r.saturating_sub(1), found: s.len() });
    }
    validate_points(&curve, s)?;
    let pencil = sections_basis(&r_basis.bundle.twisted(&TwistDivisor::sum_of(s).neg())?)?;
    let mut out = GoodSecantCheck {
        r,
        pencil_h0: pencil.h0(),
        base_locus: None,
        embedding_ranks: Vec::new(),
        birational_assumed: true,
        failure: None,
        failing_point: None,
    };
    if pencil.h0() != 2 {
        out.failure = Some(GoodSecantFailure::PencilDimension);
        return Ok(out);
    }
    let locus = global_generation_check(&pencil)?;
    let empty = locus.is_empty();
    out.base_locus = Some(locus);
    if !empty {
        out.failure = Some(GoodSecantFailure::NotGloballyGenerated);
        return Ok(out);
    }
    for p in s {
        let rank = rank2(&row(r_basis, Functional::value_at(p)), &row(r_basis, Functional::derivative_at(p)));
        out.embedding_ranks.push(rank);
        if rank < 2 && out.failure.is_none() {
            out.failure = Some(GoodSecantFailure::NotEmbedded);
            out.failing_point = Some(PointRecord::of(&curve, p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveBuilder;

    fn binary(g: i64) -> Arc<NodalCurve> {
        let mut b = CurveBuilder::new();
        let c1 = b.component("C1");
        let c2 = b.component("C2");
        for i in 0..=g {
            b.node((c1, Param::int(i)), (c2, Param::int(i * i - 5)));
        }
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn sampler_is_deterministic_and_avoids_nodes() {
        let x = binary(4);
        let a = secant_trial_points(&x, 3, 5, 6);
        let b = secant_trial_points(&x, 3, 5, 6);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| !x.is_branch_point(p.component, &p.param)));
        assert_ne!(a, secant_trial_points(&x, 3, 6, 6));
    }

    #[test]
    fn binary_genus_three_is_very_ample_on_sample() {
        let x = binary(3);
        let v = very_ample_check(&x, &AmpleConfig { exec: Execution::Sequential, ..Default::default() }).unwrap();
        assert_eq!(v.overall, Overall::VerifiedOnSample, "{:?}", v.witness);
        assert!(v.three_connected);
        assert_eq!(v.tangent_separation, Tally { passed: 24, total: 24 });
    }

    #[test]
    fn secant_found_on_binary_genus_four() {
        let x = binary(4);
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        let s = simple_secant_search(&w, &SecantConfig { budget: 50, seed: 1, exec: Execution::Sequential }).unwrap();
        let found = s.found.expect("a simple secant");
        assert_eq!(found.pencil_h0, 2);
        let good = good_secant_check(&w, &found.coords).unwrap();
        assert!(good.passed());
    }

    #[test]
    fn wrong_cardinality_is_reported() {
        let x = binary(4);
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        let p = BranchPoint { component: 0, param: Param::int(-7) };
        assert!(matches!(good_secant_check(&w, &[p]), Err(Error::WrongCardinality { expected: 2, found: 1 })));
    }
}
