use super::corpus::*;
use super::*;

#[test]
fn cubic_graph_counts() {
    let counts: Vec<usize> = [4, 6, 8].map(|n| cubic_graphs(n).len()).to_vec();
    assert_eq!(counts, vec![1, 2, 5]);
}

#[test]
fn family_invariants() {
    let k4 = graph_curve(4, &cubic_graphs(4)[0]).unwrap();
    assert_eq!((k4.num_components(), k4.nodes().len(), k4.arithmetic_genus()), (4, 6, 3));
    let b3 = binary_curve(3, 0).unwrap();
    assert_eq!((b3.num_components(), b3.nodes().len(), b3.arithmetic_genus()), (2, 4, 3));
    // g = g_1 + g_2 + g_3 + g_4 + 3
    assert_eq!(four_component_curve([1, 0, 0, 0], 0).unwrap().arithmetic_genus(), 4);
    assert_eq!(four_component_curve([1, 1, 1, 1], 0).unwrap().arithmetic_genus(), 7);
    let chain = chain_curve(3, 2, &[], 0).unwrap();
    assert_eq!(chain.nodes().len(), 4);
    for spec in CorpusSpec::default_corpus() {
        for c in generate(&spec, 3).unwrap() {
            assert!(c.curve.validate().is_ok(), "{}", c.label);
            assert!(c.curve.arithmetic_genus() >= 2, "{}", c.label);
        }
    }
}

#[test]
fn generation_is_deterministic() {
    let spec = CorpusSpec::RandomStable { components: 3, nodes: 6, count: 2 };
    let a: Vec<_> = generate(&spec, 11).unwrap().into_iter().map(|c| c.curve.to_spec()).collect();
    let b: Vec<_> = generate(&spec, 11).unwrap().into_iter().map(|c| c.curve.to_spec()).collect();
    assert_eq!(a, b);
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(matches!(binary_curve(1, 0), Err(Error::BadParameters(_))));
    assert!(matches!(chain_curve(2, 0, &[], 0), Err(Error::BadParameters(_))));
    assert!(matches!(random_stable_curve(4, 3, 0), Err(Error::BadParameters(_))));
}

#[test]
fn statement_names_match_serialization() {
    for st in Statement::ALL {
        let json = serde_json::to_string(&st).unwrap();
        assert_eq!(json, format!("\"{}\"", st.name()));
        assert_eq!(st.name().parse::<Statement>().unwrap(), st);
    }
}

fn four_component() -> Arc<NodalCurve> {
    Arc::new(four_component_curve([1, 0, 0, 0], 5).unwrap())
}

#[test]
fn main_theorem_on_the_four_component_example() {
    let x = four_component();
    let a = Subcurve::new(x.clone(), [0]).unwrap();
    let v = Variant { decomposition: Some(a), ..Default::default() };
    let cert = verify(Statement::ThmMain, &x, &v, &VerifyConfig { k_max: 2, ..Default::default() });
    assert_eq!(cert.verdict, Verdict::Confirmed, "{cert:#?}");
    assert!(cert.hypotheses.iter().all(|h| h.holds));
}

#[test]
fn degree_one_divisor_misses_the_hypothesis() {
    let x = Arc::new(binary_curve(4, 1).unwrap());
    let cfg = VerifyConfig { k_max: 2, ..Default::default() };
    let ctx = CurveContext::new(x.clone(), "binary", 0, "b4", &cfg, None);
    let v = Variant { divisor: Some(ctx.divisor(&ctx.whole(), 1)), ..Default::default() };
    let cert = verify(Statement::ThmTeo2, &x, &v, &cfg);
    assert_eq!(cert.verdict, Verdict::HypothesisNotMet);
    assert_eq!(cert.hypotheses.len(), 1);
    assert!(cert.conclusion.is_empty());
    let v2 = Variant { divisor: Some(ctx.divisor(&ctx.whole(), 2)), ..Default::default() };
    assert_eq!(verify(Statement::ThmTeo2, &x, &v2, &cfg).verdict, Verdict::Confirmed);
}

#[test]
fn missing_instance_data_is_not_a_confirmation() {
    let x = four_component();
    let cert = verify(Statement::PropQuad, &x, &Variant::default(), &VerifyConfig::default());
    assert_eq!(cert.verdict, Verdict::HypothesisNotMet);
    assert!(!cert.diagnostics.is_empty());
}

#[test]
fn empty_report_is_valid_json() {
    let r = Report::empty(&VerifyConfig::default());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    emit_report(&r, &path).unwrap();
    let back = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, r);
    assert!(back.certificates.is_empty());
}

#[test]
fn certificate_round_trips() {
    let x = four_component();
    let a = Subcurve::new(x.clone(), [0]).unwrap();
    let v = Variant { decomposition: Some(a), ..Default::default() };
    let cfg = VerifyConfig { k_max: 2, ..Default::default() };
    let cert = verify(Statement::ThmMain, &x, &v, &cfg);
    let r = Report {
        summary: Summary::of(std::slice::from_ref(&cert), 1, &[Statement::ThmMain]),
        statements: vec![Statement::ThmMain],
        certificates: vec![cert],
        ..Report::empty(&cfg)
    };
    let back = Report::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_json(), r.to_json());
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let corpus = [CorpusSpec::Binary { genus_min: 3, genus_max: 4 }];
    let sts = [Statement::ThmMain, Statement::Lem3conn, Statement::PropKge4];
    let base = VerifyConfig { k_max: 4, ..Default::default() };
    let par = run_corpus(&corpus, &sts, &base).unwrap();
    let seq = run_corpus(&corpus, &sts, &VerifyConfig { exec: Execution::Sequential, ..base }).unwrap();
    assert_eq!(par.to_json(), seq.to_json());
}
