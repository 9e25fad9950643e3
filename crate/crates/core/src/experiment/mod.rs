//! Monte Carlo harness: sample hosts, count copies, compare with predictions.

mod counters;
mod stats;

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::to_f64;
use crate::error::{Error, Result};
use crate::graph::shapes::parse_shape;
use crate::graph::{balance_class, essential_density, BalanceClass, Graph, GraphKind};
use crate::predict::{
    class_mean, cycle_poisson_mean_finite, poisson_lambda_multi, poisson_lambda_simple, power_law_cycle_prediction,
    power_law_edges, weighted_expectation_predictor, CycleNorm, LambdaConvention, Prediction,
};
use crate::random::{
    configuration_from_degrees, replicate_rng, sample_uniform_multigraph, sample_uniform_simple, solve_tuning,
    ConditionedDegrees, DegreeDistribution, DeltaSampler, DEFAULT_RETRY_CAP,
};
use crate::weights::WeightSpec;

pub use counters::{Counter, MAX_FAST_CYCLE};
pub use stats::{
    empirical_pmf, mean, median_of_means, poisson_pmf, poisson_table, poisson_tail, scaling_fit, tv_distance,
    tv_to_poisson, variance, MOM_BUCKETS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    UniformMulti,
    UniformSimple,
    Delta,
    Configuration,
}

impl Model {
    pub fn kind(self) -> GraphKind {
        match self {
            Model::UniformSimple => GraphKind::Simple,
            _ => GraphKind::Multi,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    #[default]
    Mean,
    Pmf,
    Scaling,
}

/// `m = round(c n^alpha)`, `alpha` written as a rational such as `"4/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MRule {
    pub c: f64,
    pub alpha: String,
}

impl MRule {
    pub fn edges(&self, n: usize) -> Result<usize> {
        let a: BigRational = self.alpha.parse().map_err(|_| Error::Config(format!("bad exponent {:?}", self.alpha)))?;
        let m = self.c * (n as f64).powf(to_f64(&a));
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Config(format!("m-rule gives {m}")));
        }
        Ok(m.round() as usize)
    }
}

/// One pattern name or JSON graph, or a list of them counted together.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternSpec {
    One(String),
    Family(Vec<String>),
}

impl PatternSpec {
    pub fn graphs(&self, kind: GraphKind) -> Result<Vec<Graph>> {
        match self {
            PatternSpec::One(s) => Ok(vec![parse_shape(s, kind)?]),
            PatternSpec::Family(v) => v.iter().map(|s| parse_shape(s, kind)).collect(),
        }
    }
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_rule: Option<MRule>,
    /// Degree weights for the `delta` and `configuration` models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<WeightSpec>,
    pub pattern: PatternSpec,
    #[serde(default = "one")]
    pub replicates: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub statistic: Statistic,
    /// Sizes for the `scaling` statistic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub lambda_convention: LambdaConvention,
    #[serde(default)]
    pub cycle_norm: CycleNorm,
    /// Wall-clock cap for the whole run, checked between replicates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_cap_secs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retry_cap: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if matches!(self.model, Model::Delta | Model::Configuration) {
            self.delta.as_ref().ok_or_else(|| Error::Config("model needs a delta weight spec".into()))?.validate()?;
        }
        if self.m.is_none() && self.m_rule.is_none() && !self.power_law() {
            return Err(Error::Config("give m or m_rule".into()));
        }
        if self.statistic == Statistic::Scaling && self.sizes.as_ref().is_none_or(|s| s.len() < 2) {
            return Err(Error::Config("scaling needs at least two sizes".into()));
        }
        self.patterns()?;
        Ok(())
    }

    fn power_law(&self) -> bool {
        matches!(self.delta, Some(WeightSpec::PowerLaw(_)))
    }

    pub fn patterns(&self) -> Result<Vec<Graph>> {
        self.pattern.graphs(self.model.kind())
    }

    /// Edge count at size `n`: the m-rule if present, `m` itself at the
    /// configured size, `m` scaled linearly otherwise, and for power-law
    /// weights without either the critical mean degree.
    pub fn edges(&self, n: usize) -> Result<usize> {
        if let Some(rule) = &self.m_rule {
            return rule.edges(n);
        }
        match (self.m, &self.delta) {
            (Some(m), _) if n == self.n => Ok(m),
            (Some(m), _) => Ok((m as f64 * n as f64 / self.n as f64).round() as usize),
            (None, Some(WeightSpec::PowerLaw(b))) => power_law_edges(*b, n),
            _ => Err(Error::Config("give m or m_rule".into())),
        }
    }
}

/// Parallelism from the `WORKERS` environment variable, else all cores.
pub fn workers() -> usize {
    std::env::var("WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

enum HostSampler {
    UniformMulti,
    UniformSimple,
    Delta(DeltaSampler),
    Configuration(ConditionedDegrees, u64),
}

impl HostSampler {
    fn new(cfg: &ExperimentConfig, n: usize, m: usize) -> Result<Self> {
        let retry = cfg.retry_cap.unwrap_or(DEFAULT_RETRY_CAP);
        Ok(match cfg.model {
            Model::UniformMulti => HostSampler::UniformMulti,
            Model::UniformSimple => HostSampler::UniformSimple,
            Model::Delta => {
                let mut s = DeltaSampler::new(n, m, cfg.delta.as_ref().unwrap())?;
                s.retry_cap = retry;
                HostSampler::Delta(s)
            }
            Model::Configuration => {
                let delta = cfg.delta.as_ref().unwrap();
                // a power law is sampled at its critical point; m only conditions
                let x = match delta {
                    WeightSpec::PowerLaw(_) => 1.0,
                    _ => solve_tuning(delta, 2.0 * m as f64 / n as f64)?,
                };
                let pi = DegreeDistribution::boltzmann(delta, x)?;
                HostSampler::Configuration(ConditionedDegrees::new(n, 2 * m as u64, pi), retry)
            }
        })
    }

    fn sample(&self, n: usize, m: usize, seed: u64, r: u64) -> Result<Graph> {
        let rng = &mut replicate_rng(seed, r);
        Ok(match self {
            HostSampler::UniformMulti => Graph::Multi(sample_uniform_multigraph(n, m, rng)?),
            HostSampler::UniformSimple => Graph::Simple(sample_uniform_simple(n, m, rng)?),
            HostSampler::Delta(s) => Graph::Multi(s.sample(rng)?),
            HostSampler::Configuration(cond, cap) => {
                Graph::Multi(configuration_from_degrees(&cond.sample(*cap, rng)?, rng)?)
            }
        })
    }
}

/// Copy counts of every pattern in every replicate, `out[pattern][replicate]`.
/// Replicate `r` draws from its own stream of `seed`, so the result does
/// not depend on the number of workers.
pub fn replicate_counts(
    cfg: &ExperimentConfig,
    n: usize,
    m: usize,
    patterns: &[Graph],
    seed: u64,
    threads: usize,
) -> Result<Vec<Vec<u64>>> {
    let sampler = HostSampler::new(cfg, n, m)?;
    let counters: Vec<Counter> = patterns.iter().map(Counter::for_pattern).collect::<Result<_>>()?;
    let start = Instant::now();
    let cap = cfg.time_cap_secs;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let rows: Vec<Vec<u64>> = pool.install(|| {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| {
                if cap.is_some_and(|c| start.elapsed().as_secs_f64() > c) {
                    return Err(Error::CapExceeded(format!("time cap of {}s reached", cap.unwrap())));
                }
                let host = sampler.sample(n, m, seed, r)?;
                counters.iter().map(|c| c.count(&host)).collect()
            })
            .collect::<Result<_>>()
    })?;
    Ok((0..patterns.len()).map(|i| rows.iter().map(|row| row[i]).collect()).collect())
}

fn is_cycle_like(f: &Graph) -> Option<usize> {
    match Counter::for_pattern(f).ok()? {
        Counter::Loops => Some(1),
        Counter::ParallelPairs => Some(2),
        Counter::Cycles(l) => Some(l),
        _ => None,
    }
}

/// Prediction for one pattern, and whether it is the mean of a Poisson law.
pub fn predict_pattern(cfg: &ExperimentConfig, f: &Graph, n: usize, m: usize) -> Result<(Prediction, bool)> {
    match cfg.model {
        Model::UniformMulti | Model::UniformSimple => {
            if balance_class(f)? != BalanceClass::StrictlyBalanced {
                return Ok((class_mean(f, n, m)?, false));
            }
            let (d, _) = essential_density(f)?;
            let alpha = 2.0 - 1.0 / to_f64(&d);
            let c = m as f64 / (n as f64).powf(alpha);
            let p = if cfg.model == Model::UniformSimple {
                poisson_lambda_simple(f, c)?
            } else {
                poisson_lambda_multi(f, c, cfg.lambda_convention)?
            };
            Ok((p.detail("c", c), true))
        }
        Model::Delta | Model::Configuration => {
            let delta = cfg.delta.as_ref().unwrap();
            let l = is_cycle_like(f);
            if let (WeightSpec::PowerLaw(beta), Some(l)) = (delta, l) {
                if l >= 3 {
                    return Ok((power_law_cycle_prediction(*beta, l, n)?, false));
                }
            }
            match l {
                Some(l) => Ok((cycle_poisson_mean_finite(l, n, m, delta, cfg.cycle_norm)?, true)),
                None => Ok((weighted_expectation_predictor(f, n, m, delta)?, false)),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub m: usize,
    pub empirical_mean: f64,
    pub stderr: f64,
    pub median_of_means: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_mean: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    pub exponent: Option<f64>,
    pub exponent_stderr: Option<f64>,
    /// Slope fitted to the medians of means.
    pub median_of_means_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    /// The configuration with its seed resolved.
    pub config: ExperimentConfig,
    pub n: usize,
    pub m: usize,
    pub replicates: u64,
    pub empirical_pmf: BTreeMap<u64, f64>,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub stderr: f64,
    pub median_of_means: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_mean: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub predictions: Vec<Prediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction_error: Option<String>,
    /// Poisson law at the predicted mean, on the empirical support.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_pmf: Option<BTreeMap<u64, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv_distance: Option<f64>,
    /// `(empirical - predicted) / stderr`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingReport>,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub runtime_secs: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn resolve_seed(cfg: &ExperimentConfig) -> u64 {
    cfg.seed.unwrap_or_else(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64)
    })
}

/// Report for one size, from already sampled counts (summed over the family).
pub fn summarize(cfg: &ExperimentConfig, n: usize, m: usize, patterns: &[Graph], counts: &[u64]) -> ExperimentReport {
    let mu = mean(counts);
    let var = variance(counts);
    let se = (var / counts.len() as f64).sqrt();
    let pmf = empirical_pmf(counts);
    let mut report = ExperimentReport {
        config: cfg.clone(),
        n,
        m,
        replicates: counts.len() as u64,
        empirical_mean: mu,
        empirical_variance: var,
        stderr: se,
        median_of_means: median_of_means(counts, MOM_BUCKETS),
        empirical_pmf: pmf,
        predicted_mean: None,
        predictions: Vec::new(),
        prediction_error: None,
        predicted_pmf: None,
        tv_distance: None,
        z_score: None,
        scaling: None,
        runtime_secs: 0.0,
    };
    let preds: Result<Vec<(Prediction, bool)>> = patterns.iter().map(|f| predict_pattern(cfg, f, n, m)).collect();
    match preds {
        Ok(preds) => {
            let lambda: f64 = preds.iter().map(|(p, _)| p.value).sum();
            report.predicted_mean = Some(lambda);
            if se > 0.0 {
                report.z_score = Some((mu - lambda) / se);
            }
            if preds.iter().all(|(_, poisson)| *poisson) {
                let top = report.empirical_pmf.keys().next_back().copied().unwrap_or(0);
                report.predicted_pmf = Some(poisson_table(lambda, top));
                report.tv_distance = Some(tv_to_poisson(&report.empirical_pmf, lambda));
            }
            report.predictions = preds.into_iter().map(|(p, _)| p).collect();
        }
        Err(e) => report.prediction_error = Some(e.to_string()),
    }
    report
}

fn sum_counts(per_pattern: Vec<Vec<u64>>) -> Vec<u64> {
    let r = per_pattern.first().map_or(0, Vec::len);
    (0..r).map(|i| per_pattern.iter().map(|c| c[i]).sum()).collect()
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_with_workers(config, workers())
}

pub fn run_with_workers(config: &ExperimentConfig, threads: usize) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let mut cfg = config.clone();
    let seed = resolve_seed(&cfg);
    cfg.seed = Some(seed);
    let patterns = cfg.patterns()?;
    let mut report = if cfg.statistic == Statistic::Scaling {
        let sizes = cfg.sizes.clone().unwrap();
        let mut points = Vec::new();
        let mut last = None;
        for &n in &sizes {
            let m = cfg.edges(n)?;
            let counts = sum_counts(replicate_counts(&cfg, n, m, &patterns, seed, threads)?);
            let r = summarize(&cfg, n, m, &patterns, &counts);
            points.push(ScalingPoint {
                n,
                m,
                empirical_mean: r.empirical_mean,
                stderr: r.stderr,
                median_of_means: r.median_of_means,
                predicted_mean: r.predicted_mean,
            });
            last = Some(r);
        }
        let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
        let raw: Vec<f64> = points.iter().map(|p| p.empirical_mean).collect();
        let mom: Vec<f64> = points.iter().map(|p| p.median_of_means).collect();
        let fit = scaling_fit(&ns, &raw).ok();
        let mut report = last.unwrap();
        let predicted_exponent = report.predictions.first().and_then(|p| p.exponent);
        report.scaling = Some(ScalingReport {
            exponent: fit.map(|f| f.0),
            exponent_stderr: fit.and_then(|f| f.1),
            median_of_means_exponent: scaling_fit(&ns, &mom).ok().map(|f| f.0),
            predicted_exponent,
            points,
        });
        report
    } else {
        let m = cfg.edges(cfg.n)?;
        let counts = sum_counts(replicate_counts(&cfg, cfg.n, m, &patterns, seed, threads)?);
        summarize(&cfg, cfg.n, m, &patterns, &counts)
    };
    report.runtime_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub replicates: u64,
    pub empirical_mean: f64,
    pub stderr: f64,
    pub predicted_mean: Option<f64>,
    pub tv_distance: Option<f64>,
    pub seed: u64,
}

pub const SWEEP_HEADER: &str = "n,m,replicates,empirical_mean,stderr,predicted_mean,tv_distance,seed";

impl SweepRow {
    pub fn csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.replicates,
            self.empirical_mean,
            self.stderr,
            opt(self.predicted_mean),
            opt(self.tv_distance),
            self.seed
        )
    }
}

/// One [`run`] per size, all with the same resolved seed.
pub fn sweep(config: &ExperimentConfig, sizes: &[usize]) -> Result<Vec<SweepRow>> {
    let mut cfg = config.clone();
    cfg.statistic = Statistic::Mean;
    cfg.sizes = None;
    let seed = resolve_seed(&cfg);
    cfg.seed = Some(seed);
    sizes
        .iter()
        .map(|&n| {
            let mut c = cfg.clone();
            c.n = n;
            if c.m_rule.is_none() {
                c.m = Some(cfg.edges(n)?);
            }
            let r = run(&c)?;
            Ok(SweepRow {
                n,
                m: r.m,
                replicates: r.replicates,
                empirical_mean: r.empirical_mean,
                stderr: r.stderr,
                predicted_mean: r.predicted_mean,
                tv_distance: r.tv_distance,
                seed,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}
