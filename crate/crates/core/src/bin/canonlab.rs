use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use canonlab::curve::{self, CurveSpec, NodalCurve, Subcurve};
use canonlab::geometry::{simple_secant_search, SecantConfig};
use canonlab::multiplication::power_normality;
use canonlab::scalar::{is_prime_u64, Param};
use canonlab::sections::{sections_basis, BundleSpec, TwistDivisor, TwistPoint};
use canonlab::verifier::{self, CorpusSpec, Report, Statement, Variant, VerifyConfig};
use canonlab::{Error, Execution, Result};

#[derive(Parser)]
#[command(name = "canonlab", version, about = "Sections, multiplication maps and normality checks on nodal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a curve spec and print its summary.
    Build { spec: PathBuf },
    /// Arithmetic genus.
    Genus { spec: PathBuf },
    /// Connectivity and a minimal splitting.
    Connectivity {
        spec: PathBuf,
        #[arg(long, default_value_t = curve::DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Exact basis of H^0(ω^k(T)) as JSON.
    Sections {
        spec: PathBuf,
        #[arg(long)]
        k: i64,
        /// Twist point `COMP:t[:mult]`, repeatable.
        #[arg(long)]
        twist: Vec<String>,
        /// Comma-separated component ids of a subcurve (default: whole curve).
        #[arg(long)]
        subcurve: Option<String>,
    },
    /// Coranks of H^0(ω)^{⊗k} → H^0(ω^k).
    Normality {
        spec: PathBuf,
        #[arg(long = "max-k", default_value_t = 5)]
        max_k: usize,
    },
    /// Seeded search for a simple (g-2)-secant.
    Secant {
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check one statement on one curve.
    Verify {
        #[arg(long)]
        statement: String,
        #[arg(long)]
        spec: PathBuf,
        /// Splitting `A|B` with comma-separated component ids per side.
        #[arg(long)]
        decomposition: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generate a corpus and check statements on every instance.
    Corpus {
        /// binary, graph, chain, four_component, random_stable or default.
        #[arg(long, default_value = "default")]
        family: String,
        /// Genus range `a..b` for binary curves.
        #[arg(long, default_value = "3..8")]
        genus: String,
        #[arg(long = "max-vertices", default_value_t = 8)]
        max_vertices: usize,
        /// Statement names (default: all).
        #[arg(long)]
        statement: Vec<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-k", default_value_t = 5)]
    max_k: usize,
    #[arg(long, default_value_t = 24)]
    samples: usize,
    #[arg(long = "secant-budget", default_value_t = 200)]
    secant_budget: usize,
    #[arg(long = "divisor-degrees", value_delimiter = ',', default_value = "2,3,4")]
    divisor_degrees: Vec<usize>,
    #[arg(long = "decomposition-cap")]
    decomposition_cap: Option<usize>,
    #[arg(long, default_value_t = curve::DEFAULT_ENUMERATION_BOUND)]
    bound: usize,
    /// Record wall-clock time per certificate (reports stop being reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn config(&self) -> Result<VerifyConfig> {
        Ok(VerifyConfig {
            k_max: self.max_k,
            samples: self.samples,
            secant_budget: self.secant_budget,
            divisor_degrees: self.divisor_degrees.clone(),
            decomposition_cap: self.decomposition_cap,
            bound: self.bound,
            seed: self.seed,
            modp: modp_from_env()?,
            timings: self.timings,
            exec: if self.sequential { Execution::Sequential } else { Execution::Parallel },
            ..VerifyConfig::default()
        })
    }
}

fn modp_from_env() -> Result<Option<u64>> {
    let Ok(raw) = std::env::var("CANONLAB_MODP") else { return Ok(None) };
    let p: u64 = raw.trim().parse().map_err(|_| Error::Parse(format!("CANONLAB_MODP={raw:?} is not an integer")))?;
    if !is_prime_u64(p) {
        return Err(Error::BadParameters(format!("CANONLAB_MODP={p} is not prime")));
    }
    Ok(Some(p))
}

fn load(path: &PathBuf) -> Result<Arc<NodalCurve>> {
    Ok(Arc::new(CurveSpec::read(path)?.build()?))
}

fn print(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn parse_twist(curve: &NodalCurve, s: &str) -> Result<TwistPoint> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Parse(format!("twist {s:?} is not COMP:t[:mult]"));
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let component = curve.component_index(parts[0]).ok_or_else(|| Error::Parse(format!("unknown component {}", parts[0])))?;
    let param: Param = parts[1].parse()?;
    let mult = match parts.get(2) {
        Some(m) => m.parse().map_err(|_| bad())?,
        None => 1,
    };
    Ok(TwistPoint { component, param, mult })
}

fn ids(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_decomposition(curve: &Arc<NodalCurve>, s: &str) -> Result<Subcurve> {
    let (a, b) = s.split_once('|').ok_or_else(|| Error::Parse(format!("decomposition {s:?} is not A|B")))?;
    let a = Subcurve::from_ids(curve.clone(), &ids(a))?;
    if !b.trim().is_empty() {
        let b = Subcurve::from_ids(curve.clone(), &ids(b))?;
        if a.complement().as_ref() != Some(&b) {
            return Err(Error::BadParameters("the two sides must partition the components".into()));
        }
    }
    Ok(a)
}

fn corpus_specs(family: &str, genus: &str, max_vertices: usize) -> Result<Vec<CorpusSpec>> {
    let range = || -> Result<(i64, i64)> {
        let (a, b) = genus.split_once("..").ok_or_else(|| Error::Parse(format!("genus range {genus:?} is not a..b")))?;
        let p = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad genus {x:?}")));
        Ok((p(a)?, p(b.trim_start_matches('='))?))
    };
    Ok(match family {
        "default" => CorpusSpec::default_corpus(),
        "binary" => {
            let (genus_min, genus_max) = range()?;
            vec![CorpusSpec::Binary { genus_min, genus_max }]
        }
        "graph" => vec![CorpusSpec::Graph { max_vertices }],
        "all" => CorpusSpec::default_corpus(),
        other => CorpusSpec::default_corpus().into_iter().filter(|c| c.family() == other).collect::<Vec<_>>(),
    })
    .and_then(|v: Vec<CorpusSpec>| {
        if v.is_empty() {
            Err(Error::BadParameters(format!("unknown family {family:?}")))
        } else {
            Ok(v)
        }
    })
}

fn statements(names: &[String]) -> Result<Vec<Statement>> {
    if names.is_empty() {
        return Ok(Statement::ALL.to_vec());
    }
    names.iter().flat_map(|n| n.split(',')).map(str::parse).collect()
}

fn finish(report: &Report, path: Option<&PathBuf>) -> Result<ExitCode> {
    match path {
        Some(p) => verifier::emit_report(report, p)?,
        None => print!("{}", report.to_json()),
    }
    let s = &report.summary;
    eprintln!(
        "{} certificates: {} confirmed, {} hypothesis not met, {} violations, {} inconclusive",
        s.certificates, s.confirmed, s.hypothesis_not_met, s.violations, s.inconclusive
    );
    if let Some(m) = &report.modp {
        eprintln!("mod {} cross-check: {}/{} ranks agree", m.prime, m.ranks_agreed, m.ranks_checked);
    }
    Ok(if s.violations > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { spec } => {
            let c = load(&spec)?;
            print(&json!({
                "components": c.num_components(),
                "nodes": c.nodes().len(),
                "genus": c.arithmetic_genus(),
                "spec": c.to_spec(),
            }));
        }
        Command::Genus { spec } => println!("{}", load(&spec)?.arithmetic_genus()),
        Command::Connectivity { spec, bound } => {
            let c = load(&spec)?;
            let conn = curve::connectivity(&c, bound, Execution::default())?;
            print(&json!({
                "connectivity": conn.m_max,
                "numerical": curve::numerical_connectivity(&c, bound, Execution::default())?,
                "witness": conn.witness.map(|w| w.summary()),
            }));
        }
        Command::Sections { spec, k, twist, subcurve } => {
            let c = load(&spec)?;
            let z = match &subcurve {
                Some(s) => Subcurve::from_ids(c.clone(), &ids(s))?,
                None => Subcurve::whole(c.clone()),
            };
            let t = twist.iter().map(|s| parse_twist(&c, s)).collect::<Result<Vec<_>>>()?;
            let basis = sections_basis(&BundleSpec::new(z, k, TwistDivisor::new(t))?)?;
            println!("{}", basis.to_json());
        }
        Command::Normality { spec, max_k } => {
            let c = load(&spec)?;
            print(&power_normality(&BundleSpec::canonical_power(&c, 1), max_k, Execution::default())?);
        }
        Command::Secant { spec, budget, seed } => {
            let c = load(&spec)?;
            let w = sections_basis(&BundleSpec::canonical_power(&c, 1))?;
            print(&simple_secant_search(&w, &SecantConfig { budget, seed, exec: Execution::default() })?);
        }
        Command::Verify { statement, spec, decomposition, report, run } => {
            let cfg = run.config()?;
            let st: Statement = statement.parse()?;
            let c = load(&spec)?;
            let certificates = match &decomposition {
                Some(d) => {
                    let a = parse_decomposition(&c, d)?;
                    let variant = Variant { decomposition: Some(a), ..Default::default() };
                    vec![verifier::verify(st, &c, &variant, &cfg)]
                }
                None => verifier::verify_all(st, &c, &cfg),
            };
            let summary = verifier::Summary::of(&certificates, 1, &[st]);
            let r = Report { statements: vec![st], summary, certificates, ..Report::empty(&cfg) };
            return finish(&r, report.as_ref());
        }
        Command::Corpus { family, genus, max_vertices, statement, report, run } => {
            let cfg = run.config()?;
            let corpus = corpus_specs(&family, &genus, max_vertices)?;
            let r = verifier::run_corpus(&corpus, &statements(&statement)?, &cfg)?;
            return finish(&r, report.as_ref());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
