use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use subcount::census::{self, FamilySpec};
use subcount::experiment::{self, ExperimentConfig};
use subcount::graph::shapes::parse_shape;
use subcount::oracle::oracle_distribution;
use subcount::predict::{self, CycleNorm, LambdaConvention};
use subcount::random::{replicate_rng, sample_uniform_multigraph, sample_uniform_simple, DeltaSampler};
use subcount::{Graph, GraphKind, WeightSpec};

#[derive(Parser)]
#[command(name = "subcount", version, about = "Subgraph counts in random graphs and multigraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Brute-force distribution of copy counts over all hosts.
    Oracle(Exact),
    /// Exact totals and distributions from generating functions.
    Exact(Exact),
    /// Draw random hosts, one JSON graph per line.
    Sample(Sample),
    /// Asymptotic prediction.
    Predict(Predict),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Args)]
struct Exact {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Builtin shape name or JSON graph; repeat for a family.
    #[arg(long = "family", visible_alias = "pattern", required = true)]
    patterns: Vec<String>,
    #[arg(long, default_value = "multi")]
    kind: GraphKind,
    /// Degree weights, e.g. `finite:[1,1,1/2]`.
    #[arg(long)]
    delta: Option<WeightSpec>,
    /// Number of hosts with exactly this many copies (`exact` only).
    #[arg(long)]
    t: Option<u64>,
}

#[derive(Args)]
struct Sample {
    /// Uniform model of this kind; with `--delta`, the degree-weighted multigraph model.
    #[arg(long, default_value = "multi")]
    kind: GraphKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    delta: Option<WeightSpec>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// JSON-lines output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Threshold,
    LambdaSimple,
    LambdaMulti,
    Weighted,
    CyclesFinite,
    Regular,
    SparseTree,
    PowerlawCycles,
    Periodic,
}

#[derive(Args)]
struct Predict {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    delta: Option<WeightSpec>,
    /// Degree of the regular model.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    beta: Option<f64>,
    /// Cycle length.
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, default_value = "iso-closed")]
    lambda_convention: LambdaConvention,
    #[arg(long, default_value = "half")]
    cycle_norm: CycleNorm,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.with_context(|| format!("--{name} is required for this theorem"))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // a closed pipe (`| head`) is not an error
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        },
    }
}

fn rational(q: &BigRational) -> Value {
    json!(q.to_string())
}

fn patterns(a: &Exact) -> Result<Vec<Graph>> {
    Ok(a.patterns.iter().map(|s| parse_shape(s, a.kind)).collect::<subcount::Result<_>>()?)
}

fn exact(a: &Exact) -> Result<Value> {
    let fam = FamilySpec::new(a.kind, patterns(a)?)?;
    let (total, distinguished) = match (a.kind, &a.delta) {
        (GraphKind::Multi, None) => (
            BigRational::from_integer(census::mg_total(a.n, a.m)),
            census::mg_distinguished(a.n, a.m, &fam)?,
        ),
        (GraphKind::Simple, None) => (
            BigRational::from_integer(census::sg_total(a.n, a.m)),
            census::sg_distinguished(a.n, a.m, &fam)?,
        ),
        (GraphKind::Multi, Some(d)) => {
            (census::mg_weighted_total(a.n, a.m, d)?, census::mg_distinguished_weighted(a.n, a.m, d, &fam)?)
        }
        (GraphKind::Simple, Some(_)) => bail!("degree weights apply to multigraphs"),
    };
    let value = match a.t {
        Some(t) => {
            if fam.shapes().len() != 1 || a.delta.is_some() {
                bail!("--t needs a single unweighted pattern");
            }
            census::count_with_exactly_t(a.n, a.m, &fam.shapes()[0], t, a.kind)?
        }
        None => distinguished.clone(),
    };
    let mut out = json!({
        "value_numerator": value.numer().to_string(),
        "value_denominator": value.denom().to_string(),
        "n": a.n, "m": a.m, "kind": a.kind.to_string(),
        "total": rational(&total),
        "distinguished_total": rational(&distinguished),
        "expected": rational(&census::expected_count(a.n, a.m, &fam, a.delta.as_ref())?),
    });
    if a.delta.is_none() && a.patterns.len() == 1 {
        let by_t = census::exactly_t_distribution(a.n, a.m, &fam.shapes()[0], a.kind)?;
        out["by_t"] = by_t.iter().map(|(t, c)| (t.to_string(), rational(c))).collect::<serde_json::Map<_, _>>().into();
    }
    Ok(out)
}

fn sample(a: &Sample) -> Result<()> {
    let sampler = match (&a.delta, a.kind) {
        (Some(d), GraphKind::Multi) => Some(DeltaSampler::new(a.n, a.m, d)?),
        (Some(_), GraphKind::Simple) => bail!("degree weights apply to multigraphs"),
        (None, _) => None,
    };
    let mut lines = String::new();
    for r in 0..a.count {
        let rng = &mut replicate_rng(a.seed, r);
        let g = match (&sampler, a.kind) {
            (Some(s), _) => Graph::Multi(s.sample(rng)?),
            (None, GraphKind::Multi) => Graph::Multi(sample_uniform_multigraph(a.n, a.m, rng)?),
            (None, GraphKind::Simple) => Graph::Simple(sample_uniform_simple(a.n, a.m, rng)?),
        };
        lines.push_str(&g.to_json());
        lines.push('\n');
    }
    emit(a.out.as_ref(), lines.trim_end())
}

fn predict(a: &Predict) -> Result<Value> {
    let kind = match a.theorem {
        Theorem::LambdaSimple => GraphKind::Simple,
        _ => GraphKind::Multi,
    };
    let f = || -> Result<Graph> { Ok(parse_shape(need(a.pattern.as_deref(), "pattern")?, kind)?) };
    let delta = || need(a.delta.as_ref(), "delta");
    let p = match a.theorem {
        Theorem::Threshold => {
            let t = predict::threshold_exponent(&f()?)?;
            return Ok(json!({ "formula_id": "threshold-exponent", "exponent": t.to_string(), "value": census::to_f64(&t) }));
        }
        Theorem::LambdaSimple => predict::poisson_lambda_simple(&f()?, need(a.c, "c")?)?,
        Theorem::LambdaMulti => predict::poisson_lambda_multi(&f()?, need(a.c, "c")?, a.lambda_convention)?,
        Theorem::Weighted => predict::weighted_expectation_predictor(&f()?, need(a.n, "n")?, need(a.m, "m")?, delta()?)?,
        Theorem::CyclesFinite => {
            predict::cycle_poisson_mean_finite(need(a.l, "l")?, need(a.n, "n")?, need(a.m, "m")?, delta()?, a.cycle_norm)?
        }
        Theorem::Regular => predict::regular_expectation(&f()?, need(a.n, "n")?, need(a.p, "p")?)?,
        Theorem::SparseTree => predict::sparse_tree_exponent(&f()?, delta()?)?,
        Theorem::PowerlawCycles => {
            predict::power_law_cycle_prediction(need(a.beta, "beta")?, need(a.l, "l")?, need(a.n, "n")?)?
        }
        Theorem::Periodic => predict::periodic_expectation(&f()?, need(a.n, "n")?, need(a.m, "m")?, delta()?)?,
    };
    Ok(serde_json::to_value(p)?)
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Oracle(a) => {
            let d = oracle_distribution(a.n, a.m, &patterns(&a)?, a.delta.as_ref(), a.kind)?;
            emit(None, &serde_json::to_string_pretty(&d.to_json())?)?;
        }
        Cmd::Exact(a) => emit(None, &serde_json::to_string_pretty(&exact(&a)?)?)?,
        Cmd::Sample(a) => sample(&a)?,
        Cmd::Predict(a) => emit(None, &serde_json::to_string_pretty(&predict(&a)?)?)?,
        Cmd::Experiment(ExperimentCmd::Run { config, out }) => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let report = experiment::run(&ExperimentConfig::from_json(&text)?)?;
            emit(out.as_ref(), &report.to_json())?;
        }
        Cmd::Experiment(ExperimentCmd::Sweep { config, sizes, out }) => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let rows = experiment::sweep(&ExperimentConfig::from_json(&text)?, &sizes)?;
            emit(out.as_ref(), experiment::sweep_csv(&rows).trim_end())?;
        }
    }
    Ok(())
}
