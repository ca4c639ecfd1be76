//! Global sections of `ω_Z^k(T)` on a subcurve `Z`.
//!
//! On a member component `C` with coordinate `t`, a section is
//!
//! ```text
//!     f_C(t) dt^k / Π (t - p)^{e_p}
//! ```
//!
//! where `p` runs over the finite special points of `C` (branches of nodes
//! internal to `Z` with `e_p = k`, twist points with their multiplicity) and
//! `deg f_C ≤ Σ_p e_p - 2k` (the sum including a special point at `∞`). That
//! bound equals the degree of the bundle on `C`. At a node with branches
//! `x = 0` and `y = 0` the local generator is `(dx/x)^k = (-1)^k (dy/y)^k`,
//! so the leading coefficients obey `L_a = (-1)^k L_b`; for `k = 1` this is
//! the residue condition. Negative multiplicities become numerator factors,
//! which forces vanishing to that order. Any integer `k` is accepted, which
//! gives direct access to Serre duals `ω^{1-k}(-T)`.

mod export;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::{BranchPoint, NodalCurve, Subcurve};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Nullspace};
use crate::poly::{binomial_series, series_mul, Poly};
use crate::scalar::{Param, Scalar};

pub use export::{BasisExport, FrameExport, NumeratorExport, PoleExport, SectionExport, TwistExport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TwistPoint {
    pub component: usize,
    pub param: Param,
    pub mult: i64,
}

/// Divisor supported on smooth points, kept sorted with merged multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistDivisor {
    points: Vec<TwistPoint>,
}

impl TwistDivisor {
    pub fn new(points: impl IntoIterator<Item = TwistPoint>) -> Self {
        let mut pts: Vec<TwistPoint> = points.into_iter().collect();
        pts.sort_by(|a, b| (a.component, &a.param).cmp(&(b.component, &b.param)));
        let mut merged: Vec<TwistPoint> = Vec::with_capacity(pts.len());
        for p in pts {
            match merged.last_mut() {
                Some(last) if last.component == p.component && last.param == p.param => last.mult += p.mult,
                _ => merged.push(p),
            }
        }
        merged.retain(|p| p.mult != 0);
        TwistDivisor { points: merged }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Reduced effective divisor `Σ p`.
    pub fn sum_of(points: &[BranchPoint]) -> Self {
        Self::new(points.iter().map(|p| TwistPoint { component: p.component, param: p.param.clone(), mult: 1 }))
    }

    pub fn points(&self) -> &[TwistPoint] {
        &self.points
    }

    pub fn degree(&self) -> i64 {
        self.points.iter().map(|p| p.mult).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.points.iter().all(|p| p.mult > 0)
    }

    pub fn add(&self, other: &TwistDivisor) -> TwistDivisor {
        TwistDivisor::new(self.points.iter().chain(&other.points).cloned())
    }

    pub fn scaled(&self, k: i64) -> TwistDivisor {
        TwistDivisor::new(self.points.iter().map(|p| TwistPoint { mult: p.mult * k, ..p.clone() }))
    }

    pub fn neg(&self) -> TwistDivisor {
        self.scaled(-1)
    }

    pub fn sub(&self, other: &TwistDivisor) -> TwistDivisor {
        self.add(&other.neg())
    }

    pub fn on_component(&self, c: usize) -> impl Iterator<Item = &TwistPoint> {
        self.points.iter().filter(move |p| p.component == c)
    }

    fn restricted(&self, z: &Subcurve) -> TwistDivisor {
        TwistDivisor { points: self.points.iter().filter(|p| z.contains(p.component)).cloned().collect() }
    }
}

/// Per-component pole frame of a bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub component: usize,
    /// Special points with exponents: internal node branches carry `k`.
    pub poles: Vec<(Param, i64)>,
    /// Maximum numerator degree; also the degree of the bundle on the component.
    pub degree_bound: i64,
}

impl Frame {
    pub fn exponent_at(&self, p: &Param) -> i64 {
        self.poles.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    pub fn block_len(&self) -> usize {
        (self.degree_bound + 1).max(0) as usize
    }

    /// Local expansion `g_0 + g_1 x + ...` of the section with numerator `f`
    /// at `point`, written against the adapted generator `dx^k / x^{e}` where
    /// `x` is `t - s` (finite) or `1/t` (at infinity) and `e` the exponent there.
    pub fn jet(&self, k: i64, f: &Poly, point: &Param, order: usize) -> Vec<Scalar> {
        match point {
            Param::Finite(s) => {
                let mut acc = f.taylor_at(s, order);
                for (b, e) in &self.poles {
                    if let Param::Finite(b) = b {
                        if b != s && *e != 0 {
                            acc = series_mul(&acc, &binomial_series(&(s - b), &Scalar::one(), -e, order), order);
                        }
                    }
                }
                acc
            }
            Param::Infinity => {
                let d = self.degree_bound;
                if d < 0 {
                    return vec![Scalar::zero(); order + 1];
                }
                let sign = if k.rem_euclid(2) == 1 { -Scalar::one() } else { Scalar::one() };
                // reversed numerator: coefficient of u^j is f_{d-j}
                let mut acc: Vec<Scalar> = (0..=order)
                    .map(|j| if (j as i64) <= d { f.coeff((d - j as i64) as usize) * &sign } else { Scalar::zero() })
                    .collect();
                for (b, e) in &self.poles {
                    if let Param::Finite(b) = b {
                        if *e != 0 {
                            acc = series_mul(&acc, &binomial_series(&Scalar::one(), &-b, -e, order), order);
                        }
                    }
                }
                acc
            }
        }
    }

    /// Row functional `f ↦ g_0` at `point` in coefficient coordinates.
    fn value_functional(&self, k: i64, point: &Param) -> Vec<Scalar> {
        let n = self.block_len();
        match point {
            Param::Infinity => {
                let mut row = vec![Scalar::zero(); n];
                if n > 0 {
                    row[n - 1] = if k.rem_euclid(2) == 1 { -Scalar::one() } else { Scalar::one() };
                }
                row
            }
            Param::Finite(s) => {
                let mut q = Scalar::one();
                for (b, e) in &self.poles {
                    if let Param::Finite(b) = b {
                        if b != s && *e != 0 {
                            q *= crate::scalar::qpow(&(s - b), -e);
                        }
                    }
                }
                let mut row = Vec::with_capacity(n);
                let mut pw = q;
                for _ in 0..n {
                    row.push(pw.clone());
                    pw *= s;
                }
                row
            }
        }
    }
}

/// The line bundle `ω_Z^k(T)` on a subcurve `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    pub z: Subcurve,
    pub k: i64,
    pub twist: TwistDivisor,
}

impl BundleSpec {
    pub fn new(z: Subcurve, k: i64, twist: TwistDivisor) -> Result<Self> {
        let curve = z.curve().clone();
        for p in twist.points() {
            if !z.contains(p.component) {
                return Err(Error::InvalidBundle(format!(
                    "twist point {} lies on component {} outside the subcurve",
                    p.param,
                    curve.components().get(p.component).map_or("?", |c| c.id.as_str())
                )));
            }
            if z.internal_branches_on(p.component).iter().any(|(_, q)| q == &p.param) {
                return Err(Error::TwistOnNode {
                    component: curve.components()[p.component].id.clone(),
                    param: p.param.to_string(),
                });
            }
        }
        Ok(BundleSpec { z, k, twist })
    }

    /// `ω_X^k` on the whole curve.
    pub fn canonical_power(curve: &Arc<NodalCurve>, k: i64) -> Self {
        BundleSpec { z: Subcurve::whole(curve.clone()), k, twist: TwistDivisor::zero() }
    }

    pub fn curve(&self) -> &Arc<NodalCurve> {
        self.z.curve()
    }

    pub fn arithmetic_genus(&self) -> i64 {
        self.z.arithmetic_genus()
    }

    pub fn frame(&self, c: usize) -> Frame {
        let mut poles: Vec<(Param, i64)> =
            self.z.internal_branches_on(c).into_iter().map(|(_, p)| (p, self.k)).collect();
        poles.extend(self.twist.on_component(c).map(|p| (p.param.clone(), p.mult)));
        poles.sort_by(|a, b| a.0.cmp(&b.0));
        let degree_bound = poles.iter().map(|(_, e)| e).sum::<i64>() - 2 * self.k;
        Frame { component: c, poles, degree_bound }
    }

    pub fn frames(&self) -> Vec<Frame> {
        self.z.members().iter().map(|&c| self.frame(c)).collect()
    }

    pub fn component_degree(&self, c: usize) -> i64 {
        self.frame(c).degree_bound
    }

    /// `k (2 p_a(Z) - 2) + deg T`.
    pub fn degree(&self) -> i64 {
        self.k * (2 * self.arithmetic_genus() - 2) + self.twist.degree()
    }

    /// `deg + 1 - p_a`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degree() + 1 - self.arithmetic_genus()
    }

    fn same_base(&self, other: &BundleSpec) -> Result<()> {
        if self.z != other.z {
            return Err(Error::BundleMismatch);
        }
        Ok(())
    }

    pub fn tensor(&self, other: &BundleSpec) -> Result<BundleSpec> {
        self.same_base(other)?;
        Ok(BundleSpec { z: self.z.clone(), k: self.k + other.k, twist: self.twist.add(&other.twist) })
    }

    /// `self ⊗ other^∨`.
    pub fn minus(&self, other: &BundleSpec) -> Result<BundleSpec> {
        self.same_base(other)?;
        Ok(BundleSpec { z: self.z.clone(), k: self.k - other.k, twist: self.twist.sub(&other.twist) })
    }

    pub fn power(&self, n: i64) -> BundleSpec {
        BundleSpec { z: self.z.clone(), k: self.k * n, twist: self.twist.scaled(n) }
    }

    pub fn twisted(&self, extra: &TwistDivisor) -> Result<BundleSpec> {
        BundleSpec::new(self.z.clone(), self.k, self.twist.add(extra))
    }

    /// `ω_Z ⊗ self^∨ = ω_Z^{1-k}(-T)`.
    pub fn serre_dual(&self) -> BundleSpec {
        BundleSpec { z: self.z.clone(), k: 1 - self.k, twist: self.twist.neg() }
    }

    /// Restriction to `w ⊆ Z`: branches of nodes internal to `Z` but not to
    /// `w` become twist points of multiplicity `k` (adjunction).
    pub fn restrict_to(&self, w: &Subcurve) -> Result<BundleSpec> {
        if !Arc::ptr_eq(w.curve(), self.z.curve()) && w.curve() != self.z.curve() {
            return Err(Error::BundleMismatch);
        }
        if w.members().iter().any(|&c| !self.z.contains(c)) {
            return Err(Error::InvalidBundle("restriction target is not contained in the subcurve".into()));
        }
        let curve = self.z.curve();
        let mut pts: Vec<TwistPoint> = self.twist.restricted(w).points;
        for i in self.z.internal_nodes() {
            let n = &curve.nodes()[i];
            let (ia, ib) = (w.contains(n.a.component), w.contains(n.b.component));
            let b = match (ia, ib) {
                (true, false) => &n.a,
                (false, true) => &n.b,
                _ => continue,
            };
            pts.push(TwistPoint { component: b.component, param: b.param.clone(), mult: self.k });
        }
        Ok(BundleSpec { z: w.clone(), k: self.k, twist: TwistDivisor::new(pts) })
    }

    pub fn describe(&self) -> String {
        let z = if self.z.is_whole() { "X".to_string() } else { format!("{{{}}}", self.z.ids().join(",")) };
        if self.twist.is_zero() {
            format!("ω^{} on {z}", self.k)
        } else {
            format!("ω^{}(T, deg T = {}) on {z}", self.k, self.twist.degree())
        }
    }
}

/// `ω_X^k|_Z (+ extra)` expressed as `ω_Z^k(k D_Z + extra)`.
pub fn restrict_bundle(curve: &Arc<NodalCurve>, z: &Subcurve, k: i64, extra: &TwistDivisor) -> Result<BundleSpec> {
    for p in extra.points() {
        if curve.is_branch_point(p.component, &p.param) {
            return Err(Error::TwistOnNode {
                component: curve.components()[p.component].id.clone(),
                param: p.param.to_string(),
            });
        }
    }
    let base = BundleSpec::canonical_power(curve, k).restrict_to(z)?;
    base.twisted(extra)
}

/// A global section: one numerator per member component of `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Section {
    pub numerators: Vec<Poly>,
}

impl Section {
    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(Poly::is_zero)
    }

    /// Product of sections of two bundles on the same subcurve.
    pub fn mul(&self, other: &Section) -> Section {
        Section { numerators: self.numerators.iter().zip(&other.numerators).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &Section) -> Section {
        Section { numerators: self.numerators.iter().zip(&other.numerators).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Section {
        Section { numerators: self.numerators.iter().map(|a| a.scale(c)).collect() }
    }
}

/// Where to evaluate a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalPoint {
    /// A smooth point of `Z` (possibly a twist point).
    Smooth(BranchPoint),
    /// Node frame `(dx/x)^k` on branch `0` (a) or `1` (b).
    Node { node: usize, branch: usize },
}

/// Trivialization used for a smooth point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalFrame {
    /// Generator of the bundle at the point, `dx^k / x^e`.
    Adapted,
    /// `dt^k` (or `du^k` at infinity), ignoring the twist.
    Standard,
}

/// Explicit basis of `H^0(Z, ω_Z^k(T))`.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    pub bundle: BundleSpec,
    pub frames: Vec<Frame>,
    pub sections: Vec<Section>,
    offsets: Vec<usize>,
    nvars: usize,
    free: Vec<usize>,
    constraints: Matrix,
}

impl SectionBasis {
    pub fn h0(&self) -> usize {
        self.sections.len()
    }

    /// `h0 - χ` (Riemann-Roch).
    pub fn h1(&self) -> i64 {
        self.h0() as i64 - self.bundle.euler_characteristic()
    }

    pub fn constraint_matrix(&self) -> &Matrix {
        &self.constraints
    }

    pub fn num_unknowns(&self) -> usize {
        self.nvars
    }

    fn member_pos(&self, c: usize) -> Option<usize> {
        self.bundle.z.local_index(c)
    }

    /// Flattened coefficient vector; `None` if a numerator exceeds its degree bound.
    pub fn flatten(&self, s: &Section) -> Option<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.nvars];
        for (i, (f, fr)) in s.numerators.iter().zip(&self.frames).enumerate() {
            if let Some(d) = f.degree() {
                if d >= fr.block_len() {
                    return None;
                }
            }
            for (j, c) in f.coeffs().iter().enumerate() {
                v[self.offsets[i] + j] = c.clone();
            }
        }
        Some(v)
    }

    fn unflatten(&self, v: &[Scalar]) -> Section {
        Section {
            numerators: self
                .frames
                .iter()
                .enumerate()
                .map(|(i, fr)| Poly::new(v[self.offsets[i]..self.offsets[i] + fr.block_len()].to_vec()))
                .collect(),
        }
    }

    pub fn contains(&self, s: &Section) -> bool {
        match self.flatten(s) {
            Some(v) => self.constraints.mul_vec(&v).iter().all(Zero::is_zero),
            None => false,
        }
    }

    /// Coordinates of `s` in this basis, or `None` if `s` is not a section.
    pub fn coordinates(&self, s: &Section) -> Option<Vec<Scalar>> {
        let v = self.flatten(s)?;
        if !self.constraints.mul_vec(&v).iter().all(Zero::is_zero) {
            return None;
        }
        Some(self.free.iter().map(|&f| v[f].clone()).collect())
    }

    /// Coordinates of a section known to belong here.
    ///
    /// # Panics
    /// If `s` is not a section of this bundle; that signals a gluing error.
    pub fn express(&self, s: &Section) -> Vec<Scalar> {
        self.coordinates(s).unwrap_or_else(|| {
            panic!("product fell outside H^0({}): gluing constraints violated", self.bundle.describe())
        })
    }

    pub fn combine(&self, coords: &[Scalar]) -> Section {
        let mut acc = Section { numerators: vec![Poly::zero(); self.frames.len()] };
        for (c, s) in coords.iter().zip(&self.sections) {
            if !c.is_zero() {
                acc = acc.add(&s.scale(c));
            }
        }
        acc
    }

    /// Local jet of `s` at a point of member component `c`.
    pub fn jet(&self, s: &Section, c: usize, param: &Param, order: usize) -> Vec<Scalar> {
        let i = self.member_pos(c).expect("component belongs to the subcurve");
        self.frames[i].jet(self.bundle.k, &s.numerators[i], param, order)
    }

    pub fn evaluate(&self, s: &Section, at: &EvalPoint, frame: EvalFrame) -> Result<Scalar> {
        let curve = self.bundle.curve();
        match at {
            EvalPoint::Node { node, branch } => {
                let n = curve
                    .nodes()
                    .get(*node)
                    .ok_or_else(|| Error::BadParameters(format!("no node #{node}")))?;
                let b = if *branch == 0 { &n.a } else { &n.b };
                if self.member_pos(b.component).is_none() {
                    return Err(Error::BadParameters(format!("node {} is not on the subcurve", n.id)));
                }
                Ok(self.jet(s, b.component, &b.param, 0).swap_remove(0))
            }
            EvalPoint::Smooth(p) => {
                let i = self
                    .member_pos(p.component)
                    .ok_or_else(|| Error::BadParameters("point is not on the subcurve".into()))?;
                let e = self.frames[i].exponent_at(&p.param);
                match frame {
                    EvalFrame::Adapted => Ok(self.jet(s, p.component, &p.param, 0).swap_remove(0)),
                    EvalFrame::Standard if e <= 0 => {
                        if e < 0 {
                            Ok(Scalar::zero())
                        } else {
                            Ok(self.jet(s, p.component, &p.param, 0).swap_remove(0))
                        }
                    }
                    EvalFrame::Standard => {
                        let jet = self.jet(s, p.component, &p.param, e as usize);
                        if jet[..e as usize].iter().any(|x| !x.is_zero()) {
                            return Err(Error::PoleAtPoint(format!("{} on {}", p.param, curve.components()[p.component].id)));
                        }
                        Ok(jet[e as usize].clone())
                    }
                }
            }
        }
    }

    /// `k x h0` matrix of the functional applied to every basis section.
    pub fn functional_rows(&self, rows: &[Functional]) -> Matrix {
        let data = rows
            .iter()
            .map(|f| self.sections.iter().map(|s| f.apply(self, s)).collect())
            .collect();
        Matrix::from_rows(data, self.h0())
    }
}

/// Linear functionals on sections used by rank tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Functional {
    /// `j`-th adapted jet coefficient at a smooth point or node branch.
    Jet { component: usize, param: Param, order: usize },
}

impl Functional {
    pub fn value_at(p: &BranchPoint) -> Self {
        Functional::Jet { component: p.component, param: p.param.clone(), order: 0 }
    }

    pub fn derivative_at(p: &BranchPoint) -> Self {
        Functional::Jet { component: p.component, param: p.param.clone(), order: 1 }
    }

    pub fn apply(&self, basis: &SectionBasis, s: &Section) -> Scalar {
        match self {
            Functional::Jet { component, param, order } => basis.jet(s, *component, param, *order).swap_remove(*order),
        }
    }
}

/// Builds the node-gluing system and returns an exact nullspace basis.
pub fn sections_basis(bundle: &BundleSpec) -> Result<SectionBasis> {
    let bundle = BundleSpec::new(bundle.z.clone(), bundle.k, bundle.twist.clone())?;
    let frames = bundle.frames();
    let mut offsets = Vec::with_capacity(frames.len());
    let mut nvars = 0;
    for f in &frames {
        offsets.push(nvars);
        nvars += f.block_len();
    }
    let z = &bundle.z;
    let curve = z.curve().clone();
    let k = bundle.k;
    let sign = if k.rem_euclid(2) == 1 { -Scalar::one() } else { Scalar::one() };
    let mut rows = Vec::new();
    for i in z.internal_nodes() {
        let n = &curve.nodes()[i];
        let mut row = vec![Scalar::zero(); nvars];
        for (b, coef) in [(&n.a, Scalar::one()), (&n.b, -sign.clone())] {
            let pos = z.local_index(b.component).unwrap();
            let fr = &frames[pos];
            for (j, x) in fr.value_functional(k, &b.param).into_iter().enumerate() {
                row[offsets[pos] + j] += x * &coef;
            }
        }
        rows.push(row);
    }
    let constraints = Matrix::from_rows(rows, nvars);
    let Nullspace { basis, free, .. } = constraints.nullspace();
    let mut out = SectionBasis { bundle, frames, sections: Vec::new(), offsets, nvars, free, constraints };
    out.sections = basis.iter().map(|v| out.unflatten(v)).collect();
    Ok(out)
}

/// Matrix of a linear map between section spaces.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Mu,
    Rho,
    SymPower,
    Evaluation,
}

#[derive(Clone, Debug)]
pub struct LinearMap {
    pub kind: MapKind,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    /// `codomain_dim x domain_dim`.
    pub matrix: Matrix,
    pub source: String,
    pub target: String,
    rank: std::sync::OnceLock<usize>,
}

impl LinearMap {
    pub fn new(kind: MapKind, matrix: Matrix, source: String, target: String) -> Self {
        LinearMap {
            kind,
            domain_dim: matrix.ncols(),
            codomain_dim: matrix.nrows(),
            matrix,
            source,
            target,
            rank: std::sync::OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        *self.rank.get_or_init(|| self.matrix.rank())
    }

    pub fn corank(&self) -> usize {
        self.codomain_dim - self.rank()
    }

    pub fn kernel_dim(&self) -> usize {
        self.domain_dim - self.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.corank() == 0
    }

    pub fn rank_mod(&self, p: u64) -> Option<usize> {
        self.matrix.rank_mod(p)
    }
}

/// `ρ: H^0(Y, L) → H^0(W, L|_W)` for `W ⊆ Y`; returns the map and the target basis.
pub fn restriction_between(source: &SectionBasis, w: &Subcurve) -> Result<(LinearMap, SectionBasis)> {
    let target_bundle = source.bundle.restrict_to(w)?;
    let target = sections_basis(&target_bundle)?;
    let positions: Vec<usize> = w.members().iter().map(|&c| source.member_pos(c).unwrap()).collect();
    let columns: Vec<Vec<Scalar>> = source
        .sections
        .iter()
        .map(|s| {
            let r = Section { numerators: positions.iter().map(|&p| s.numerators[p].clone()).collect() };
            target.express(&r)
        })
        .collect();
    let m = Matrix::from_columns(&columns, target.h0());
    Ok((
        LinearMap::new(MapKind::Rho, m, source.bundle.describe(), target.bundle.describe()),
        target,
    ))
}

/// `ρ_Z: H^0(X, ω_X^k) → H^0(Z, ω_X^k|_Z)`.
pub fn restriction_map(curve: &Arc<NodalCurve>, z: &Subcurve, k: i64) -> Result<LinearMap> {
    let source = sections_basis(&BundleSpec::canonical_power(curve, k))?;
    Ok(restriction_between(&source, z)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothBase {
    pub component: String,
    /// Monic polynomial whose roots (with multiplicity) are the finite base points.
    #[serde(with = "crate::scalar::scalar_vec_str")]
    pub finite_part: Vec<Scalar>,
    pub at_infinity: usize,
}

/// Common vanishing locus of all sections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BaseLocus {
    pub whole_components: Vec<String>,
    pub nodes: Vec<String>,
    pub smooth: Vec<SmoothBase>,
    /// Degree of the base divisor on the smooth locus.
    pub smooth_degree: usize,
}

impl BaseLocus {
    pub fn is_empty(&self) -> bool {
        self.whole_components.is_empty() && self.nodes.is_empty() && self.smooth_degree == 0
    }
}

/// Exact base locus via per-component gcds and node leading coefficients.
pub fn global_generation_check(basis: &SectionBasis) -> Result<BaseLocus> {
    if basis.h0() == 0 {
        return Err(Error::ZeroSpace);
    }
    let z = &basis.bundle.z;
    let curve = z.curve();
    let mut out = BaseLocus::default();
    let mut base_nodes = std::collections::BTreeSet::new();
    for (pos, &c) in z.members().iter().enumerate() {
        let frame = &basis.frames[pos];
        let nonzero: Vec<&Poly> =
            basis.sections.iter().map(|s| &s.numerators[pos]).filter(|f| !f.is_zero()).collect();
        let branches = z.internal_branches_on(c);
        if nonzero.is_empty() {
            out.whole_components.push(curve.components()[c].id.clone());
            base_nodes.extend(branches.iter().map(|(n, _)| *n));
            continue;
        }
        let mut g = nonzero.iter().fold(Poly::zero(), |acc, f| acc.gcd(f));
        let inf_mult = nonzero
            .iter()
            .map(|f| (frame.degree_bound - f.degree().unwrap() as i64) as usize)
            .min()
            .unwrap();
        let mut at_infinity = inf_mult;
        for (node, p) in &branches {
            match p {
                Param::Finite(a) => {
                    let m = g.root_multiplicity(a);
                    if m > 0 {
                        base_nodes.insert(*node);
                        for _ in 0..m {
                            g = g.div_rem(&Poly::linear_root(a)).0;
                        }
                    }
                }
                Param::Infinity => {
                    if inf_mult > 0 {
                        base_nodes.insert(*node);
                    }
                    at_infinity = 0;
                }
            }
        }
        let deg = g.degree().unwrap_or(0) + at_infinity;
        if deg > 0 {
            out.smooth_degree += deg;
            out.smooth.push(SmoothBase {
                component: curve.components()[c].id.clone(),
                finite_part: g.monic().into_coeffs(),
                at_infinity,
            });
        }
    }
    out.nodes = base_nodes.into_iter().map(|i| curve.nodes()[i].id.clone()).collect();
    Ok(out)
}

#[cfg(test)]
mod tests;
