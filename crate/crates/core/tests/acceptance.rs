//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canonlab::curve::{self, NodalCurve, Subcurve};
use canonlab::geometry::{
    simple_secant_search, very_ample_check, AmpleConfig, AmpleWitness, Overall, SecantConfig,
};
use canonlab::multiplication::{bpf_pencil_check, k_normality, quadric_count};
use canonlab::scalar::{is_prime_u64, ratio};
use canonlab::verifier::corpus::{binary_curve, chain_curve};
use canonlab::verifier::{self, generate, CorpusSpec, Report, Statement, VerifyConfig};
use canonlab::{sections_basis, BundleSpec, Execution, Param, Scalar, TwistDivisor, TwistPoint};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn corpus(specs: &[CorpusSpec]) -> Vec<(String, Arc<NodalCurve>)> {
    specs
        .iter()
        .flat_map(|s| generate(s, 0).unwrap())
        .map(|c| (c.label, c.curve))
        .collect()
}

fn h0(b: &BundleSpec) -> usize {
    sections_basis(b).unwrap().h0()
}

fn dimension_suite() -> Outcome {
    let start = Instant::now();
    let curves = corpus(&[
        CorpusSpec::Binary { genus_min: 3, genus_max: 8 },
        CorpusSpec::Graph { max_vertices: 8 },
        CorpusSpec::FourComponent { genera: [1, 0, 0, 0] },
    ]);
    let mut bad = Vec::new();
    for (label, x) in &curves {
        let g = x.arithmetic_genus();
        if h0(&BundleSpec::canonical_power(x, 1)) as i64 != g {
            bad.push(format!("{label}: h0(ω)"));
        }
        for k in 2..=5 {
            if h0(&BundleSpec::canonical_power(x, k)) as i64 != (2 * k - 1) * (g - 1) {
                bad.push(format!("{label}: h0(ω^{k})"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 60.0,
        format!("{} curves, k = 1..5, {} mismatches, {secs:.1} s {:?}", curves.len(), bad.len(), bad),
    )
}

fn riemann_roch_suite() -> Outcome {
    let curves = corpus(&CorpusSpec::default_corpus());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut bad, mut vanishing_checks) = (Vec::new(), 0);
    for trial in 0..100 {
        let (label, x) = &curves[rng.random_range(0..curves.len())];
        let subs = curve::connected_subcurves(&Subcurve::whole(x.clone()), 16).unwrap();
        let z = if rng.random_bool(0.5) { Subcurve::whole(x.clone()) } else { subs[rng.random_range(0..subs.len())].clone() };
        let effective = trial % 3 == 0;
        let k = if effective { 1 } else { rng.random_range(-1..=3) };
        let mut pts: Vec<TwistPoint> = Vec::new();
        for _ in 0..rng.random_range(usize::from(effective)..4) {
            let c = z.members()[rng.random_range(0..z.members().len())];
            let p = Param::Finite(ratio(rng.random_range(-40..40), rng.random_range(1..6)));
            if x.is_branch_point(c, &p) || pts.iter().any(|q| q.component == c && q.param == p) {
                continue;
            }
            let mult = if effective { rng.random_range(1..3) } else { rng.random_range(-2..3) };
            pts.push(TwistPoint { component: c, param: p, mult });
        }
        let twist = TwistDivisor::new(pts);
        let l = BundleSpec::new(z.clone(), k, twist.clone()).unwrap();
        let basis = sections_basis(&l).unwrap();
        let h0 = basis.h0() as i64;
        let chi = l.degree() + 1 - z.arithmetic_genus();
        let h1_formula = h0 - chi;
        let h1_dual = sections_basis(&l.serre_dual()).unwrap().h0() as i64;
        if basis.h1() != h1_formula || h1_formula != h1_dual {
            bad.push(format!("{label} trial {trial}"));
        }
        if k == 1 && twist.is_effective() && !twist.is_zero() && z.is_connected() {
            vanishing_checks += 1;
            if h1_formula != 0 {
                bad.push(format!("{label} trial {trial}: h1(ω_Z(E)) = {h1_formula}"));
            }
        }
    }
    outcome(
        bad.is_empty() && vanishing_checks > 0,
        format!("100 bundles, {vanishing_checks} vanishing cross-checks, {} failures {:?}", bad.len(), bad),
    )
}

fn theorem_suite() -> Outcome {
    let cfg = VerifyConfig::default();
    let r = verifier::run_corpus(&CorpusSpec::default_corpus(), &Statement::ALL, &cfg).unwrap();
    let s = &r.summary;
    outcome(
        s.violations == 0 && s.substantive_normality >= 50,
        format!(
            "{} certificates over {} curves: {} violations, {} substantive normality confirmations, {} inconclusive",
            s.certificates, s.instances, s.violations, s.substantive_normality, s.inconclusive
        ),
    )
}

/// Gauss-Jordan rank over `Q`, independent of the library's elimination.
fn oracle_rank(mut a: Vec<Vec<Scalar>>) -> usize {
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Scalar::one() / &a[r][c];
        let pivot: Vec<Scalar> = a[r].iter().map(|x| x * &inv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        a[r] = pivot;
        r += 1;
    }
    r
}

fn quadric_suite() -> Outcome {
    let curves = corpus(&CorpusSpec::default_corpus());
    let (mut checked, mut bad) = (0, Vec::new());
    for (label, x) in &curves {
        let g = x.arithmetic_genus();
        if !k_normality(x, 2, Execution::default()).unwrap().normal_up_to(2) {
            continue;
        }
        checked += 1;
        let w = sections_basis(&BundleSpec::canonical_power(x, 1)).unwrap();
        let count = quadric_count(&w, Execution::default()).unwrap();
        // coefficient vectors of the products s_i s_j, ranked without the target basis
        let products: Vec<_> = (0..w.h0())
            .flat_map(|i| (i..w.h0()).map(move |j| (i, j)))
            .map(|(i, j)| w.sections[i].mul(&w.sections[j]))
            .collect();
        let widths: Vec<usize> = (0..x.num_components())
            .map(|c| products.iter().map(|p| p.numerators[c].coeffs().len()).max().unwrap_or(0))
            .collect();
        let rows: Vec<Vec<Scalar>> = products
            .iter()
            .map(|p| {
                p.numerators
                    .iter()
                    .zip(&widths)
                    .flat_map(|(f, &wd)| {
                        let mut cs = f.coeffs().to_vec();
                        cs.resize(wd, Scalar::zero());
                        cs
                    })
                    .collect()
            })
            .collect();
        let independent = products.len() - oracle_rank(rows);
        let expected = ((g - 2) * (g - 3) / 2) as usize;
        if count != expected || independent != expected {
            bad.push(format!("{label}: {count} / {independent} vs {expected}"));
        }
    }
    outcome(bad.is_empty() && checked > 0, format!("{checked} quadratically normal curves, {} mismatches {:?}", bad.len(), bad))
}

fn contrapositive_suite() -> Outcome {
    let x = Arc::new(chain_curve(2, 2, &[1, 1], 0).unwrap());
    let v = very_ample_check(&x, &AmpleConfig::default()).unwrap();
    let conn = curve::connectivity(&x, 16, Execution::default()).unwrap();
    let witness_ok = matches!(v.witness, Some(AmpleWitness::LowDegreeIntersection { delta: 2, .. }));
    outcome(
        v.overall == Overall::Refuted && witness_ok && conn.m_max == Some(2),
        format!("genus {}, verdict {:?}, witness {:?}, connectivity {:?}", x.arithmetic_genus(), v.overall, v.witness, conn.m_max),
    )
}

fn pencil_suite() -> Outcome {
    let curves: Vec<_> = corpus(&CorpusSpec::default_corpus()).into_iter().filter(|(_, x)| x.arithmetic_genus() >= 4).collect();
    let (mut pairs, mut bad) = (0, Vec::new());
    let mut seed = 0u64;
    'outer: while pairs < 20 {
        for (label, x) in &curves {
            if pairs >= 20 {
                break 'outer;
            }
            let w = sections_basis(&BundleSpec::canonical_power(x, 1)).unwrap();
            let search = simple_secant_search(&w, &SecantConfig { budget: 50, seed, exec: Execution::default() }).unwrap();
            let Some(found) = search.found else { continue };
            let m = sections_basis(&w.bundle.twisted(&TwistDivisor::sum_of(&found.coords).neg()).unwrap()).unwrap();
            let l = match pairs % 3 {
                0 => BundleSpec::canonical_power(x, 1),
                1 => BundleSpec::canonical_power(x, 2),
                _ => BundleSpec::canonical_power(x, 3),
            };
            let l = sections_basis(&l).unwrap();
            let r = bpf_pencil_check(&l, &m, Execution::default()).unwrap();
            pairs += 1;
            if !r.kernel_identity {
                bad.push(format!("{label} seed {seed}: ker {} vs {}", r.kernel_dim, r.expected_kernel));
            }
        }
        seed += 1;
        if seed > 20 {
            break;
        }
    }
    outcome(pairs >= 20 && bad.is_empty(), format!("{pairs} (L, M) pairs, {} kernel mismatches {:?}", bad.len(), bad))
}

fn schreyer_suite() -> Outcome {
    let curves = corpus(&CorpusSpec::default_corpus());
    let (mut found, mut bad) = (0, Vec::new());
    for (label, x) in &curves {
        if x.arithmetic_genus() < 4 {
            continue;
        }
        let w = sections_basis(&BundleSpec::canonical_power(x, 1)).unwrap();
        let s = simple_secant_search(&w, &SecantConfig::default()).unwrap();
        if s.found.is_none() {
            continue;
        }
        found += 1;
        if !k_normality(x, 5, Execution::default()).unwrap().normal_up_to(5) {
            bad.push(label.clone());
        }
    }
    let mut binary_hits = Vec::new();
    for g in 4..=6 {
        let x = Arc::new(binary_curve(g, 0).unwrap());
        let w = sections_basis(&BundleSpec::canonical_power(&x, 1)).unwrap();
        let s = simple_secant_search(&w, &SecantConfig { budget: 50, ..SecantConfig::default() }).unwrap();
        binary_hits.push(s.trial);
    }
    outcome(
        bad.is_empty() && found > 0 && binary_hits.iter().all(Option::is_some),
        format!("{found} curves with a secant, {} not normal {:?}; binary g = 4..6 first hits {:?}", bad.len(), bad, binary_hits),
    )
}

fn next_prime(mut n: u64) -> u64 {
    while !is_prime_u64(n) {
        n += 1;
    }
    n
}

fn determinism_suite() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, modp: Option<u64>| {
        let path = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_canonlab"));
        cmd.args(["corpus", "--family", "binary", "--genus", "3..8", "--seed", "7", "--report"]).arg(&path);
        cmd.env_remove("CANONLAB_MODP");
        if let Some(p) = modp {
            cmd.env("CANONLAB_MODP", p.to_string());
        }
        let status = cmd.output().unwrap().status;
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (c1, a) = run("a.json", None);
    let (c2, b) = run("b.json", None);
    let prime = next_prime(rand::rng().random_range((1u64 << 20) + 1..1u64 << 40));
    let (c3, m) = run("m.json", Some(prime));
    let parsed: Report = serde_json::from_slice(&m).unwrap();
    let plain: Report = serde_json::from_slice(&a).unwrap();
    let modp = parsed.modp.clone().unwrap();
    let same_certs = parsed.certificates == plain.certificates;
    outcome(
        c1 == Some(0) && c2 == Some(0) && c3 == Some(0) && !a.is_empty() && a == b && same_certs
            && modp.ranks_checked > 0 && modp.ranks_agreed == modp.ranks_checked,
        format!(
            "{} bytes, identical: {}; mod {prime}: {}/{} ranks reproduced",
            a.len(),
            a == b,
            modp.ranks_agreed,
            modp.ranks_checked
        ),
    )
}

fn main() {
    let mut all = true;
    let mut line = |n: usize, name: &str, o: Outcome| {
        all &= o.pass;
        println!("[{}] criterion {n} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    line(1, "dimension suite", dimension_suite());
    line(2, "Riemann-Roch suite", riemann_roch_suite());
    line(3, "theorem suite", theorem_suite());
    line(4, "quadric count", quadric_suite());
    line(5, "low-connectivity contrapositive", contrapositive_suite());
    line(6, "pencil-trick identity", pencil_suite());
    line(7, "secant cross-check", schreyer_suite());
    line(8, "determinism", determinism_suite());
    if !all {
        std::process::exit(1);
    }
}
