//! Multiplication maps `μ_{M,N}: H^0(M) ⊗ H^0(N) → H^0(M ⊗ N)` and the
//! normality verdicts built from them.

use serde::Serialize;

use crate::curve::{self, NodalCurve};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::par::{self, Execution};
use crate::sections::{global_generation_check, sections_basis, BundleSpec, Section, SectionBasis};

pub use crate::sections::{LinearMap, MapKind};

/// Expresses every product `a_i · b_j` (row-major in `(i, j)`) in `target`.
fn product_columns(a: &[Section], b: &[Section], target: &SectionBasis, exec: Execution) -> Matrix {
    let nb = b.len();
    let cols = par::map_range(exec, a.len() * nb, |idx| target.express(&a[idx / nb].mul(&b[idx % nb])));
    Matrix::from_columns(&cols, target.h0())
}

/// `μ_{M,N}` into a precomputed basis of `M ⊗ N`.
pub fn mult_map_into(m: &SectionBasis, n: &SectionBasis, target: &SectionBasis, exec: Execution) -> Result<LinearMap> {
    let expected = m.bundle.tensor(&n.bundle)?;
    if expected != target.bundle {
        return Err(Error::BundleMismatch);
    }
    let matrix = product_columns(&m.sections, &n.sections, target, exec);
    Ok(LinearMap::new(
        MapKind::Mu,
        matrix,
        format!("{} ⊗ {}", m.bundle.describe(), n.bundle.describe()),
        target.bundle.describe(),
    ))
}

/// `μ_{M,N}`; the target basis is computed from the tensor bundle.
pub fn mult_map(m: &SectionBasis, n: &SectionBasis, exec: Execution) -> Result<LinearMap> {
    let target = sections_basis(&m.bundle.tensor(&n.bundle)?)?;
    mult_map_into(m, n, &target, exec)
}

/// `Sym^2 H^0(L) → H^0(L^2)` on the monomials `s_i s_j`, `i ≤ j`.
pub fn sym_square_map(l: &SectionBasis, target: &SectionBasis, exec: Execution) -> Result<LinearMap> {
    if l.bundle.power(2) != target.bundle {
        return Err(Error::BundleMismatch);
    }
    let n = l.h0();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let cols = par::map(exec, &pairs, |&(i, j)| target.express(&l.sections[i].mul(&l.sections[j])));
    Ok(LinearMap::new(
        MapKind::SymPower,
        Matrix::from_columns(&cols, target.h0()),
        format!("Sym^2 {}", l.bundle.describe()),
        target.bundle.describe(),
    ))
}

/// `dim ker(Sym^2 H^0(L) → H^0(L^2))`.
pub fn quadric_count(l: &SectionBasis, exec: Execution) -> Result<usize> {
    let target = sections_basis(&l.bundle.power(2))?;
    Ok(sym_square_map(l, &target, exec)?.kernel_dim())
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub k: usize,
    pub target_dim: usize,
    /// Dimension of the image of `H^0(L)^{⊗k}`.
    pub image_dim: usize,
    pub corank: usize,
    /// Rank data of `μ_{L, L^{k-1}}` (absent for `k = 1`).
    pub mu_domain_dim: Option<usize>,
    pub mu_rank: Option<usize>,
    pub mu_corank: Option<usize>,
}

impl Stage {
    pub fn surjective(&self) -> bool {
        self.corank == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub bundle: String,
    pub h0: usize,
    pub k_max: usize,
    pub stages: Vec<Stage>,
    /// All listed coranks vanish.
    pub normally_generated: bool,
    #[serde(skip)]
    pub maps: Vec<LinearMap>,
}

impl NormalityReport {
    pub fn stage(&self, k: usize) -> Option<&Stage> {
        self.stages.get(k.checked_sub(1)?)
    }

    /// `H^0(L)^{⊗k} → H^0(L^k)` is surjective.
    pub fn k_normally_generated(&self, k: usize) -> Option<bool> {
        self.stage(k).map(Stage::surjective)
    }

    /// All stages up to `k` are surjective.
    pub fn normal_up_to(&self, k: usize) -> bool {
        self.stages.iter().take(k).all(Stage::surjective)
    }
}

/// Images of `H^0(L)^{⊗j} → H^0(L^j)` for `j = 1..=k_max`, built iteratively
/// through `μ_{L, L^{j-1}}`.
pub fn power_normality(l: &BundleSpec, k_max: usize, exec: Execution) -> Result<NormalityReport> {
    let base = sections_basis(l)?;
    let mut stages = vec![Stage {
        k: 1,
        target_dim: base.h0(),
        image_dim: base.h0(),
        corank: 0,
        mu_domain_dim: None,
        mu_rank: None,
        mu_corank: None,
    }];
    let mut maps = Vec::new();
    let mut prev = base.clone();
    // generators of the previous image; `None` when it is all of H^0(L^{j-1})
    let mut gens: Option<Vec<Section>> = None;
    for j in 2..=k_max {
        let target = sections_basis(&l.power(j as i64))?;
        let mu = mult_map_into(&base, &prev, &target, exec)?;
        let (image_dim, pivots_src) = match &gens {
            None => (mu.rank(), None),
            Some(g) => {
                let stage = LinearMap::new(
                    MapKind::Mu,
                    product_columns(&base.sections, g, &target, exec),
                    format!("H^0({})^{{⊗{j}}}", l.describe()),
                    target.bundle.describe(),
                );
                let r = stage.rank();
                maps.push(stage.clone());
                (r, Some((stage, g.clone())))
            }
        };
        stages.push(Stage {
            k: j,
            target_dim: target.h0(),
            image_dim,
            corank: target.h0() - image_dim,
            mu_domain_dim: Some(mu.domain_dim),
            mu_rank: Some(mu.rank()),
            mu_corank: Some(mu.corank()),
        });
        gens = if image_dim == target.h0() {
            None
        } else {
            let (matrix, g): (&Matrix, Vec<Section>) = match &pivots_src {
                Some((stage, g)) => (&stage.matrix, g.clone()),
                None => (&mu.matrix, prev.sections.clone()),
            };
            let nb = g.len();
            Some(matrix.pivot_columns().into_iter().map(|c| base.sections[c / nb].mul(&g[c % nb])).collect())
        };
        maps.push(mu);
        prev = target;
    }
    let normally_generated = stages.iter().all(Stage::surjective);
    Ok(NormalityReport { bundle: l.describe(), h0: base.h0(), k_max, stages, normally_generated, maps })
}

/// Normality of `ω_X` through `k_max`.
pub fn k_normality(curve: &std::sync::Arc<NodalCurve>, k_max: usize, exec: Execution) -> Result<NormalityReport> {
    let g = curve.arithmetic_genus();
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    power_normality(&BundleSpec::canonical_power(curve, 1), k_max, exec)
}

#[derive(Clone, Debug, Serialize)]
pub struct PencilReport {
    pub kernel_dim: usize,
    /// `h0(L ⊗ M^∨)`.
    pub expected_kernel: usize,
    pub kernel_identity: bool,
    /// `h1(L ⊗ M^∨)`.
    pub h1_difference: i64,
    pub corank: usize,
    /// Surjectivity is only asserted when `h1(L ⊗ M^∨) = 0`.
    pub surjectivity_asserted: bool,
    pub holds: bool,
    #[serde(skip)]
    pub map: Option<LinearMap>,
}

/// Base-point-free pencil trick: `ker μ_{L,M} ≅ H^0(L ⊗ M^∨)`.
pub fn bpf_pencil_check(l: &SectionBasis, m: &SectionBasis, exec: Execution) -> Result<PencilReport> {
    if m.h0() != 2 {
        return Err(Error::NotAPencil(m.h0()));
    }
    if !global_generation_check(m)?.is_empty() {
        return Err(Error::NotGloballyGenerated);
    }
    let mu = mult_map(l, m, exec)?;
    let diff = sections_basis(&l.bundle.minus(&m.bundle)?)?;
    let kernel_identity = mu.kernel_dim() == diff.h0();
    let surjectivity_asserted = diff.h1() == 0;
    let holds = kernel_identity && (!surjectivity_asserted || mu.is_surjective());
    Ok(PencilReport {
        kernel_dim: mu.kernel_dim(),
        expected_kernel: diff.h0(),
        kernel_identity,
        h1_difference: diff.h1(),
        corank: mu.corank(),
        surjectivity_asserted,
        holds,
        map: Some(mu),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateFailure {
    pub subcurve: Vec<String>,
    pub degree: i64,
    pub genus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateResult {
    pub passed: bool,
    pub checked: usize,
    pub failing: Option<GateFailure>,
}

/// `deg H|_Z ≥ 2 p_a(Z) + 1` for every connected `Z` inside the bundle's support.
pub fn franciosi_gate(h: &BundleSpec, bound: usize) -> Result<GateResult> {
    if !h.z.is_connected() {
        return Err(Error::BadParameters("the degree gate needs a connected curve".into()));
    }
    let degrees: Vec<(usize, i64)> = h.z.members().iter().map(|&c| (c, h.component_degree(c))).collect();
    let subs = curve::connected_subcurves(&h.z, bound)?;
    let checked = subs.len();
    for z in subs {
        let degree: i64 = degrees.iter().filter(|(c, _)| z.contains(*c)).map(|(_, d)| d).sum();
        let genus = z.arithmetic_genus();
        if degree < 2 * genus + 1 {
            return Ok(GateResult {
                passed: false,
                checked,
                failing: Some(GateFailure { subcurve: z.ids(), degree, genus }),
            });
        }
    }
    Ok(GateResult { passed: true, checked, failing: None })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::curve::{CurveBuilder, Subcurve};
    use crate::scalar::Param;
    use crate::sections::TwistDivisor;

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
    fn binary_genus_three_is_quadratically_normal() {
        let x = binary(3);
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        let mu = mult_map(&w, &w, Execution::Sequential).unwrap();
        assert_eq!((mu.domain_dim, mu.codomain_dim, mu.corank()), (9, 6, 0));
    }

    #[test]
    fn trivial_bundle_is_a_unit() {
        let x = binary(4);
        let o = sections_basis(&BundleSpec::canonical_power(&x, 0)).unwrap();
        let w2 = sections_basis(&BundleSpec::canonical_power(&x, 2)).unwrap();
        let mu = mult_map(&o, &w2, Execution::Sequential).unwrap();
        assert_eq!(mu.rank(), w2.h0());
        assert_eq!(mu.kernel_dim(), 0);
    }

    #[test]
    fn genus_four_has_one_quadric() {
        let x = binary(4);
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        assert_eq!(quadric_count(&w, Execution::Sequential).unwrap(), 1);
    }

    #[test]
    fn normality_report_for_binary_curves() {
        let x = binary(5);
        let r = k_normality(&x, 4, Execution::Parallel).unwrap();
        assert!(r.normally_generated);
        assert_eq!(r.stages[3].target_dim, 7 * 4);
    }

    #[test]
    fn pencil_requires_two_sections() {
        let x = binary(3);
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        let o = sections_basis(&BundleSpec::canonical_power(&x, 0)).unwrap();
        assert!(matches!(bpf_pencil_check(&w, &o, Execution::Sequential), Err(Error::NotAPencil(1))));
    }

    #[test]
    fn gate_fails_on_the_whole_curve() {
        let x = binary(3);
        let r = franciosi_gate(&BundleSpec::canonical_power(&x, 1), 16).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failing.unwrap().subcurve, vec!["C1", "C2"]);
        let b = Subcurve::new(x.clone(), [1]).unwrap();
        let restricted = crate::sections::restrict_bundle(&x, &b, 1, &TwistDivisor::zero()).unwrap();
        assert!(franciosi_gate(&restricted, 16).unwrap().passed);
    }
}
