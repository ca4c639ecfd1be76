use super::*;
use crate::curve::CurveBuilder;
use crate::scalar::int;

fn p(n: i64) -> Param {
    Param::int(n)
}

fn binary(g: i64) -> Arc<NodalCurve> {
    let mut b = CurveBuilder::new();
    let c1 = b.component("C1");
    let c2 = b.component("C2");
    for i in 0..=g {
        let t2 = if i == g { Param::Infinity } else { p(3 * i - 5) };
        b.node((c1, p(i)), (c2, t2));
    }
    Arc::new(b.build().unwrap())
}

fn line() -> Arc<NodalCurve> {
    let mut b = CurveBuilder::new();
    b.component("L");
    Arc::new(b.build().unwrap())
}

fn nodal_cubic() -> Arc<NodalCurve> {
    let mut b = CurveBuilder::new();
    let c = b.component("E");
    b.node((c, p(0)), (c, Param::Infinity));
    Arc::new(b.build().unwrap())
}

#[test]
fn projective_line() {
    let x = line();
    assert_eq!(sections_basis(&BundleSpec::canonical_power(&x, 0)).unwrap().h0(), 1);
    assert_eq!(sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap().h0(), 0);
    let t = TwistDivisor::new([0, 1, 2].map(|i| TwistPoint { component: 0, param: p(i), mult: 1 }));
    let o3 = BundleSpec::new(Subcurve::whole(x.clone()), 0, t).unwrap();
    let b = sections_basis(&o3).unwrap();
    assert_eq!((b.h0(), b.h1()), (4, 0));
}

#[test]
fn nodal_cubic_is_canonically_trivial() {
    let x = nodal_cubic();
    for k in 0..4 {
        let b = sections_basis(&BundleSpec::canonical_power(&x, k)).unwrap();
        assert_eq!(b.h0(), 1, "k = {k}");
    }
}

#[test]
fn binary_curve_dimensions() {
    for g in 2..6 {
        let x = binary(g);
        assert_eq!(x.arithmetic_genus(), g);
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        assert_eq!(w.h0() as i64, g);
        assert_eq!(w.h1(), 1);
        for k in 2..4 {
            let b = sections_basis(&BundleSpec::canonical_power(&x, k)).unwrap();
            assert_eq!(b.h0() as i64, (2 * k - 1) * (g - 1));
        }
    }
}

#[test]
fn canonical_sections_have_opposite_residues() {
    let x = binary(3);
    let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
    for s in &w.sections {
        for n in x.nodes() {
            let ra = w.jet(s, n.a.component, &n.a.param, 0).remove(0);
            let rb = w.jet(s, n.b.component, &n.b.param, 0).remove(0);
            assert_eq!(ra, -rb);
        }
    }
}

#[test]
fn duality_matches_riemann_roch() {
    let x = binary(4);
    let z = Subcurve::whole(x.clone());
    let t = TwistDivisor::new([TwistPoint { component: 0, param: ratio_param(1, 2), mult: 2 }]);
    for k in -1..3 {
        let l = BundleSpec::new(z.clone(), k, t.clone()).unwrap();
        let b = sections_basis(&l).unwrap();
        let dual = sections_basis(&l.serre_dual()).unwrap();
        assert_eq!(b.h1(), dual.h0() as i64, "k = {k}");
    }
}

fn ratio_param(n: i64, d: i64) -> Param {
    Param::Finite(crate::scalar::ratio(n, d))
}

#[test]
fn restriction_adds_boundary_twist() {
    let x = binary(3);
    let u = Subcurve::new(x.clone(), [0]).unwrap();
    let r = restrict_bundle(&x, &u, 1, &TwistDivisor::zero()).unwrap();
    // ω_X restricted to a line meeting the rest in 4 points has degree 2
    assert_eq!(r.degree(), 2);
    assert_eq!(sections_basis(&r).unwrap().h0(), 3);
    let rho = restriction_map(&x, &u, 1).unwrap();
    assert_eq!(rho.rank(), 3);
    let err = restrict_bundle(
        &x,
        &u,
        1,
        &TwistDivisor::new([TwistPoint { component: 0, param: p(0), mult: 1 }]),
    )
    .unwrap_err();
    assert!(matches!(err, Error::TwistOnNode { .. }));
}

#[test]
fn canonical_system_is_base_point_free_on_binary_curves() {
    let x = binary(3);
    let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
    assert!(global_generation_check(&w).unwrap().is_empty());
}

#[test]
fn forced_base_point_is_located() {
    // O(q) on a curve of genus one has the single section 1, vanishing at q
    let x = nodal_cubic();
    let z = Subcurve::whole(x.clone());
    let t = TwistDivisor::new([TwistPoint { component: 0, param: p(3), mult: 1 }]);
    let b = sections_basis(&BundleSpec::new(z, 0, t).unwrap()).unwrap();
    assert_eq!(b.h0(), 1);
    let locus = global_generation_check(&b).unwrap();
    assert_eq!(locus.smooth_degree, 1);
    assert_eq!(locus.smooth[0].finite_part, vec![int(-3), int(1)]);
    assert!(locus.nodes.is_empty());
}

#[test]
fn zero_space_is_rejected() {
    let x = line();
    let b = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
    assert!(matches!(global_generation_check(&b), Err(Error::ZeroSpace)));
}

#[test]
fn standard_frame_detects_poles() {
    let x = binary(3);
    let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
    let s = &w.sections[0];
    let smooth = EvalPoint::Smooth(BranchPoint { component: 0, param: p(7) });
    let a = w.evaluate(s, &smooth, EvalFrame::Adapted).unwrap();
    let st = w.evaluate(s, &smooth, EvalFrame::Standard).unwrap();
    assert_eq!(a, st);
    let node = EvalPoint::Smooth(BranchPoint { component: 0, param: p(0) });
    let residues: Vec<Scalar> = w.sections.iter().map(|s| w.evaluate(s, &node, EvalFrame::Adapted).unwrap()).collect();
    let i = residues.iter().position(|r| !r.is_zero()).expect("some section has a residue at the node");
    assert!(matches!(w.evaluate(&w.sections[i], &node, EvalFrame::Standard), Err(Error::PoleAtPoint(_))));
}

#[test]
fn export_round_trip_is_exact() {
    let x = binary(4);
    let w = sections_basis(&BundleSpec::canonical_power(&x, 2)).unwrap();
    let json = w.to_json();
    let parsed = BasisExport::from_json(&json).unwrap();
    assert_eq!(parsed, w.export());
    let (bundle, sections) = parsed.import(&x).unwrap();
    assert_eq!(bundle, w.bundle);
    assert_eq!(sections, w.sections);
}
