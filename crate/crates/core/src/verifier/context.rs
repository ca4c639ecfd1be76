//! Per-curve memo of the expensive measurements shared between statements.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::{ModpTally, VerifyConfig};
use crate::curve::{self, Connectivity, Decomposition, NodalCurve, Subcurve};
use crate::error::Error;
use crate::geometry::{
    self, curve_hash, AmpleConfig, AmplenessVerdict, PointSampler, SecantConfig, SecantSearch,
};
use crate::multiplication::{franciosi_gate, mult_map, mult_map_into, power_normality, GateResult, NormalityReport};
use crate::sections::{
    restrict_bundle, restriction_between, sections_basis, BundleSpec, LinearMap, SectionBasis, TwistDivisor, TwistPoint,
};

/// A measurement that could not be completed.
#[derive(Clone, Debug)]
pub struct Failure {
    pub message: String,
    /// Hit an enumeration bound rather than a mathematical obstruction.
    pub resource: bool,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { resource: matches!(e, Error::TooManyComponents { .. }), message: e.to_string() }
    }
}

pub type Measured<T> = Result<Arc<T>, Failure>;

fn memo<T>(cell: &OnceLock<Measured<T>>, f: impl FnOnce() -> Result<T, Error>) -> Measured<T> {
    cell.get_or_init(|| f().map(Arc::new).map_err(Failure::from)).clone()
}

/// Dimensions and rank of a linear map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapInfo {
    pub source: String,
    pub target: String,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub corank: usize,
}

impl MapInfo {
    pub fn surjective(&self) -> bool {
        self.corank == 0
    }
}

/// Memoized data attached to one subcurve `Z ⊆ X`.
pub struct Side {
    pub z: Subcurve,
    omega: OnceLock<Measured<SectionBasis>>,
    restricted: Vec<OnceLock<Measured<SectionBasis>>>,
    mu_restricted: Vec<OnceLock<Measured<MapInfo>>>,
    normality: OnceLock<Measured<NormalityReport>>,
    own_ample: OnceLock<Measured<AmplenessVerdict>>,
    mu_omega: OnceLock<Measured<MapInfo>>,
    rho: OnceLock<Measured<MapInfo>>,
    gate: OnceLock<Measured<GateResult>>,
}

pub struct CurveContext<'a> {
    pub curve: Arc<NodalCurve>,
    pub cfg: VerifyConfig,
    pub family: String,
    pub index: usize,
    pub label: String,
    pub genus: i64,
    pub hash: u64,
    tally: Option<&'a ModpTally>,
    canonical: Vec<OnceLock<Measured<SectionBasis>>>,
    normality: OnceLock<Measured<NormalityReport>>,
    ample: OnceLock<Measured<AmplenessVerdict>>,
    connectivity: OnceLock<Measured<Connectivity>>,
    decompositions: OnceLock<Measured<Vec<Decomposition>>>,
    secant: OnceLock<Measured<SecantSearch>>,
    sides: Mutex<BTreeMap<Vec<usize>, Arc<Side>>>,
}

impl<'a> CurveContext<'a> {
    pub fn new(
        curve: Arc<NodalCurve>,
        family: &str,
        index: usize,
        label: &str,
        cfg: &VerifyConfig,
        tally: Option<&'a ModpTally>,
    ) -> Self {
        CurveContext {
            genus: curve.arithmetic_genus(),
            hash: curve_hash(&curve),
            curve,
            cfg: cfg.clone(),
            family: family.to_string(),
            index,
            label: label.to_string(),
            tally,
            canonical: (0..=cfg.k_max + 1).map(|_| OnceLock::new()).collect(),
            normality: OnceLock::new(),
            ample: OnceLock::new(),
            connectivity: OnceLock::new(),
            decompositions: OnceLock::new(),
            secant: OnceLock::new(),
            sides: Mutex::new(BTreeMap::new()),
        }
    }

    fn note(&self, map: &LinearMap) -> MapInfo {
        if let Some(t) = self.tally {
            t.record(map);
        }
        MapInfo {
            source: map.source.clone(),
            target: map.target.clone(),
            domain_dim: map.domain_dim,
            codomain_dim: map.codomain_dim,
            rank: map.rank(),
            corank: map.corank(),
        }
    }

    fn note_report(&self, r: &NormalityReport) {
        for m in &r.maps {
            self.note(m);
        }
    }

    pub fn whole(&self) -> Subcurve {
        Subcurve::whole(self.curve.clone())
    }

    /// `H^0(ω_X^k)`.
    pub fn canonical(&self, k: usize) -> Measured<SectionBasis> {
        match self.canonical.get(k) {
            Some(cell) => memo(cell, || sections_basis(&BundleSpec::canonical_power(&self.curve, k as i64))),
            None => sections_basis(&BundleSpec::canonical_power(&self.curve, k as i64))
                .map(Arc::new)
                .map_err(Failure::from),
        }
    }

    /// Power normality of `ω_X` through `k_max`.
    pub fn normality(&self) -> Measured<NormalityReport> {
        memo(&self.normality, || {
            let g = self.genus;
            if g < 2 {
                return Err(Error::GenusTooSmall(g));
            }
            let r = power_normality(&BundleSpec::canonical_power(&self.curve, 1), self.cfg.k_max, self.cfg.exec)?;
            self.note_report(&r);
            Ok(r)
        })
    }

    pub fn ample(&self) -> Measured<AmplenessVerdict> {
        memo(&self.ample, || {
            let basis = self.canonical(1).map_err(|f| Error::BadParameters(f.message))?;
            geometry::very_ample_check_with(&basis, &self.ample_config())
        })
    }

    fn ample_config(&self) -> AmpleConfig {
        AmpleConfig { samples: self.cfg.samples, seed: self.cfg.seed, bound: self.cfg.bound, exec: self.cfg.exec }
    }

    pub fn connectivity(&self) -> Measured<Connectivity> {
        memo(&self.connectivity, || curve::connectivity(&self.curve, self.cfg.bound, self.cfg.exec))
    }

    /// Splittings with both sides connected, capped by the configuration.
    pub fn decompositions(&self) -> Measured<Vec<Decomposition>> {
        memo(&self.decompositions, || {
            let mut all = curve::connected_decompositions(&self.curve, self.cfg.bound)?;
            if let Some(cap) = self.cfg.decomposition_cap {
                all.truncate(cap);
            }
            Ok(all)
        })
    }

    pub fn secant(&self) -> Measured<SecantSearch> {
        memo(&self.secant, || {
            let basis = self.canonical(1).map_err(|f| Error::BadParameters(f.message))?;
            let cfg = SecantConfig { budget: self.cfg.secant_budget, seed: self.cfg.seed, exec: self.cfg.exec };
            geometry::simple_secant_search(&basis, &cfg)
        })
    }

    pub fn side(&self, z: &Subcurve) -> Arc<Side> {
        let mut sides = self.sides.lock().expect("side cache poisoned");
        sides
            .entry(z.members().to_vec())
            .or_insert_with(|| {
                Arc::new(Side {
                    z: z.clone(),
                    omega: OnceLock::new(),
                    restricted: (0..=self.cfg.k_max).map(|_| OnceLock::new()).collect(),
                    mu_restricted: (0..=self.cfg.k_max).map(|_| OnceLock::new()).collect(),
                    normality: OnceLock::new(),
                    own_ample: OnceLock::new(),
                    mu_omega: OnceLock::new(),
                    rho: OnceLock::new(),
                    gate: OnceLock::new(),
                })
            })
            .clone()
    }

    /// `H^0(ω_Z)`.
    pub fn omega(&self, side: &Side) -> Measured<SectionBasis> {
        memo(&side.omega, || sections_basis(&BundleSpec::new(side.z.clone(), 1, TwistDivisor::zero())?))
    }

    /// `H^0(ω_X^j|_Z)`.
    pub fn restricted(&self, side: &Side, j: usize) -> Measured<SectionBasis> {
        let build = || sections_basis(&restrict_bundle(&self.curve, &side.z, j as i64, &TwistDivisor::zero())?);
        match side.restricted.get(j) {
            Some(cell) => memo(cell, build),
            None => build().map(Arc::new).map_err(Failure::from),
        }
    }

    /// `μ_{ω_Z, ω_X^j|_Z}`.
    pub fn mu_restricted(&self, side: &Side, j: usize) -> Measured<MapInfo> {
        let build = || {
            let w = self.omega(side).map_err(|f| Error::BadParameters(f.message))?;
            let r = self.restricted(side, j).map_err(|f| Error::BadParameters(f.message))?;
            Ok(self.note(&mult_map(&w, &r, self.cfg.exec)?))
        };
        match side.mu_restricted.get(j) {
            Some(cell) => memo(cell, build),
            None => build().map(Arc::new).map_err(Failure::from),
        }
    }

    /// Power normality of `ω_X|_Z` through `k_max`.
    pub fn side_normality(&self, side: &Side) -> Measured<NormalityReport> {
        memo(&side.normality, || {
            let l = restrict_bundle(&self.curve, &side.z, 1, &TwistDivisor::zero())?;
            let r = power_normality(&l, self.cfg.k_max, self.cfg.exec)?;
            self.note_report(&r);
            Ok(r)
        })
    }

    /// Very ampleness of `ω_Z` on `Z` viewed as a curve of its own.
    pub fn own_ample(&self, side: &Side) -> Measured<AmplenessVerdict> {
        memo(&side.own_ample, || {
            if side.z.is_whole() {
                return self.ample().map(|a| (*a).clone()).map_err(|f| Error::BadParameters(f.message));
            }
            let own = Arc::new(side.z.to_curve());
            geometry::very_ample_check(&own, &self.ample_config())
        })
    }

    /// `μ_{ω_Z}`.
    pub fn mu_omega(&self, side: &Side) -> Measured<MapInfo> {
        memo(&side.mu_omega, || {
            let w = self.omega(side).map_err(|f| Error::BadParameters(f.message))?;
            let target = sections_basis(&w.bundle.power(2))?;
            Ok(self.note(&mult_map_into(&w, &w, &target, self.cfg.exec)?))
        })
    }

    /// `ρ_Z: H^0(ω_X) → H^0(ω_X|_Z)`.
    pub fn rho(&self, side: &Side) -> Measured<MapInfo> {
        memo(&side.rho, || {
            let w = self.canonical(1).map_err(|f| Error::BadParameters(f.message))?;
            let (map, _) = restriction_between(&w, &side.z)?;
            Ok(self.note(&map))
        })
    }

    /// Degree gate for `ω_X|_Z`.
    pub fn gate(&self, side: &Side) -> Measured<GateResult> {
        memo(&side.gate, || {
            let h = restrict_bundle(&self.curve, &side.z, 1, &TwistDivisor::zero())?;
            franciosi_gate(&h, self.cfg.bound)
        })
    }

    /// Any map measured on the fly, with its mod-p cross-check.
    pub fn measure(&self, map: &LinearMap) -> MapInfo {
        self.note(map)
    }

    /// `X` followed by the distinct sides of the connected splittings, capped.
    pub fn subcurves(&self) -> Vec<Subcurve> {
        let mut out = vec![self.whole()];
        if let Ok(ds) = self.decompositions() {
            for d in ds.iter() {
                for s in [&d.u, &d.v] {
                    if out.len() > self.cfg.subcurve_cap {
                        return out;
                    }
                    if !out.contains(s) {
                        out.push(s.clone());
                    }
                }
            }
        }
        out
    }

    /// Seeded effective divisor of degree `d` on the smooth locus of `z`;
    /// from degree 3 on the first point is doubled.
    pub fn divisor(&self, z: &Subcurve, d: usize) -> TwistDivisor {
        if d == 0 {
            return TwistDivisor::zero();
        }
        let distinct = if d >= 3 { d - 1 } else { d };
        let stream = (1u64 << 40) | (z.bits() << 8) | d as u64;
        let pts = PointSampler::new(&self.curve, self.cfg.seed, stream).distinct_points(z.members(), distinct);
        TwistDivisor::new(pts.into_iter().enumerate().map(|(i, p)| TwistPoint {
            component: p.component,
            param: p.param,
            mult: if i == 0 && d >= 3 { 2 } else { 1 },
        }))
    }
}
