//! Asymptotic predictions: thresholds, Poisson parameters, weighted
//! expectations, sparse-tree exponents, power-law cycle constants and the
//! periodic-weight adjustment.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::census::to_f64;
use crate::error::{Error, Result};
use crate::graph::{aut_count, balance_class, essential_density, is_connected, BalanceClass, Graph};
use crate::random::{solve_tuning, solve_tuning_seq};
use crate::special::{gamma, ln_factorial, zeta};
use crate::weights::{CoefficientSequence, WeightSpec};

/// Which constant to use for the Poisson parameter of a multigraph pattern.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaConvention {
    /// `(2c)^m / aut`, from the isomorphism-closed class EGF.
    #[default]
    IsoClosed,
    /// `c^m / (m! n!)`, from the EGF of a single canonical element.
    SingleElement,
}

/// Normalization inside the finite-weight cycle mean.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleNorm {
    /// `n / (2m)`.
    #[default]
    Half,
    /// `n / m`.
    Full,
}

impl FromStr for LambdaConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iso-closed" => Ok(Self::IsoClosed),
            "single-element" => Ok(Self::SingleElement),
            _ => Err(Error::Config(format!("unknown lambda convention {s:?}"))),
        }
    }
}

impl FromStr for CycleNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(Self::Half),
            "full" => Ok(Self::Full),
            _ => Err(Error::Config(format!("unknown cycle normalization {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub value: f64,
    /// Exact value when every input is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Growth exponent, where one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    pub formula_id: String,
    pub conventions: BTreeMap<String, String>,
    /// Intermediate quantities (tuning root, constants).
    pub details: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Prediction {
    fn new(formula_id: &str, value: f64) -> Self {
        Prediction {
            value,
            exact: None,
            exponent: None,
            formula_id: formula_id.into(),
            conventions: BTreeMap::new(),
            details: BTreeMap::new(),
            diagnostic: None,
        }
    }

    fn exact(mut self, q: &BigRational) -> Self {
        self.exact = Some(q.to_string());
        self
    }

    pub fn detail(mut self, k: &str, v: f64) -> Self {
        self.details.insert(k.into(), v);
        self
    }

    fn convention(mut self, k: &str, v: &str) -> Self {
        self.conventions.insert(k.into(), v.into());
        self
    }
}

/// `2 - 1/d*(F)`: the exponent `alpha` below which `m = n^alpha` edges
/// leave no copy of `F`.
pub fn threshold_exponent(f: &Graph) -> Result<BigRational> {
    let (d, _) = essential_density(f)?;
    if d.is_zero() {
        return Err(Error::Domain("pattern has no edges".into()));
    }
    Ok(BigRational::from_integer(BigInt::from(2)) - d.recip())
}

fn require_strictly_balanced(f: &Graph) -> Result<()> {
    if balance_class(f)? != BalanceClass::StrictlyBalanced {
        return Err(Error::NotStrictlyBalanced);
    }
    Ok(())
}

/// `F(n, 2m/n^2) = (1/aut) n^{n(F)} (2m/n^2)^{m(F)}`, the leading term of
/// the expected count in the uniform models.
pub fn class_mean(f: &Graph, n: usize, m: usize) -> Result<Prediction> {
    let p = 2.0 * m as f64 / (n as f64 * n as f64);
    let aut = aut_count(f)? as f64;
    let v = (n as f64).powi(f.n() as i32) * p.powi(f.m() as i32) / aut;
    Ok(Prediction::new("class-egf-mean", v).detail("aut", aut))
}

/// `(2c)^m / aut(F)` for simple graphs at `m ~ c n^{2 - 1/d(F)}`.
pub fn poisson_lambda_simple(f: &Graph, c: f64) -> Result<Prediction> {
    require_strictly_balanced(f)?;
    let aut = aut_count(f)? as f64;
    Ok(Prediction::new("poisson-lambda-simple", (2.0 * c).powi(f.m() as i32) / aut).detail("aut", aut))
}

/// Poisson parameter for a multigraph pattern at `m ~ c n^{2 - 1/d(F)}`.
pub fn poisson_lambda_multi(f: &Graph, c: f64, conv: LambdaConvention) -> Result<Prediction> {
    require_strictly_balanced(f)?;
    let aut = aut_count(f)? as f64;
    let m = f.m() as i32;
    let (value, name) = match conv {
        LambdaConvention::IsoClosed => ((2.0 * c).powi(m) / aut, "iso-closed"),
        LambdaConvention::SingleElement => {
            (c.powi(m) / (ln_factorial(f.m() as u64) + ln_factorial(f.n() as u64)).exp(), "single-element")
        }
    };
    Ok(Prediction::new("poisson-lambda-multi", value).detail("aut", aut).convention("lambda_convention", name))
}

/// `chi^d Delta^{(d)}(chi) / Delta(chi)` for every degree up to `top`, where
/// `chi` solves the tuning equation at mean degree `2m/n`. At an end of the
/// support the tuning root degenerates and the ratios take their limits,
/// the falling factorials of the end point.
fn degree_ratios(delta: &WeightSpec, n: usize, m: usize, top: u32) -> Result<(Option<f64>, Vec<f64>)> {
    let target = 2.0 * m as f64 / n as f64;
    let lo = delta.min_support() as f64;
    let hi = delta.max_support().map(|d| d as f64);
    let forced = if target == lo { Some(lo) } else if Some(target) == hi { hi } else { None };
    if let Some(p) = forced {
        let ratios = (0..=top).map(|d| (0..d).map(|i| p - i as f64).product::<f64>().max(0.0)).collect();
        return Ok((None, ratios));
    }
    let chi = solve_tuning(delta, target)?;
    let base = delta.log_eval(0, chi);
    let ratios = (0..=top)
        .map(|d| (d as f64 * chi.ln() + delta.log_eval(d, chi) - base).exp())
        .collect();
    Ok((Some(chi), ratios))
}

/// `F(n, 1/(2m), (chi^d Delta^{(d)}(chi)/Delta(chi))_d)
///  = (1/aut) n^{n(F)} (2m)^{-m(F)} prod_v ratio(deg v)`.
pub fn weighted_expectation_predictor(f: &Graph, n: usize, m: usize, delta: &WeightSpec) -> Result<Prediction> {
    let degs = f.degrees();
    let top = degs.iter().copied().max().unwrap_or(0);
    let (chi, ratios) = degree_ratios(delta, n, m, top)?;
    let aut = aut_count(f)? as f64;
    let log_scale = f.n() as f64 * (n as f64).ln() - f.m() as f64 * (2.0 * m as f64).ln();
    let prod: f64 = degs.iter().map(|&d| ratios[d as usize]).product();
    let mut p = Prediction::new("weighted-expectation", log_scale.exp() * prod / aut).detail("aut", aut);
    if let Some(x) = chi {
        p = p.detail("chi", x);
    }
    Ok(p)
}

/// Poisson mean of the number of `l`-cycles in a degree-weighted multigraph:
/// `(1/2l) (norm * chi^2 Delta''(chi)/Delta(chi))^l`, with `norm = n/(2m)`
/// by default or `n/m`.
pub fn cycle_poisson_mean_finite(l: usize, n: usize, m: usize, delta: &WeightSpec, norm: CycleNorm) -> Result<Prediction> {
    if l == 0 {
        return Err(Error::Domain("cycle length must be positive".into()));
    }
    let (chi, ratios) = degree_ratios(delta, n, m, 2)?;
    let (scale, name) = match norm {
        CycleNorm::Half => (n as f64 / (2.0 * m as f64), "half"),
        CycleNorm::Full => (n as f64 / m as f64, "full"),
    };
    let value = (scale * ratios[2]).powi(l as i32) / (2.0 * l as f64);
    let mut p = Prediction::new("cycle-poisson-mean", value).convention("cycle_norm", name).detail("ratio2", ratios[2]);
    if let Some(x) = chi {
        p = p.detail("chi", x);
    }
    Ok(p)
}

/// Expected copies in a random `p`-regular multigraph:
/// `F(n, 1/(np), (mu_d)_d)` with `mu_d = p (p-1) ... (p-d+1)`.
pub fn regular_expectation(f: &Graph, n: usize, p: u32) -> Result<Prediction> {
    let aut = aut_count(f)?;
    let mut q = BigRational::new(BigInt::one(), BigInt::from(aut));
    q *= BigRational::from_integer(BigInt::from(n).pow(f.n() as u32));
    q /= BigRational::from_integer((BigInt::from(n) * BigInt::from(p)).pow(f.m() as u32));
    for d in f.degrees() {
        let mu: BigInt = (0..d).map(|i| BigInt::from(p as i64 - i as i64)).product();
        if d > p {
            q = BigRational::zero();
            break;
        }
        q *= BigRational::from_integer(mu);
    }
    Ok(Prediction::new("regular-expectation", to_f64(&q)).exact(&q))
}

/// `mu(j) = min { d >= j : delta_d > 0 }`, searched up to a bound.
fn mu(delta: &WeightSpec, j: u64) -> Option<u64> {
    let end = delta.max_support().unwrap_or(j + 1_000_000);
    (j..=end).find(|&d| delta.is_positive(d))
}

/// Growth of the expected tree count when `m = Theta(n eps_n)`, `eps_n -> 0`:
/// `E = Theta(n eps^e)` with `e = -(k-1) + gamma/mu(1)`, `gamma = sum_v mu(deg v)`.
/// The `threshold` detail is `mu(1) / ((k-1) mu(1) - gamma)`.
pub fn sparse_tree_exponent(t: &Graph, delta: &WeightSpec) -> Result<Prediction> {
    if !delta.is_positive(0) {
        return Err(Error::Domain("needs delta_0 > 0".into()));
    }
    if t.n() == 0 || t.m() + 1 != t.n() || !is_connected(t) {
        return Err(Error::InvalidGraph("pattern must be a tree".into()));
    }
    let k = t.n() as f64;
    let mu1 = mu(delta, 1).ok_or_else(|| Error::Domain("no positive degree in the support".into()))? as f64;
    let mut gamma_sum = 0.0;
    for d in t.degrees() {
        match mu(delta, d as u64) {
            Some(v) => gamma_sum += v as f64,
            None => {
                let mut p = Prediction::new("sparse-tree", 0.0);
                p.diagnostic = Some(format!("no supported degree >= {d}; the tree never appears"));
                return Ok(p);
            }
        }
    }
    let exponent = -(k - 1.0) + gamma_sum / mu1;
    let denom = (k - 1.0) * mu1 - gamma_sum;
    let threshold = if denom == 0.0 { f64::NAN } else { mu1 / denom };
    let mut p = Prediction::new("sparse-tree", exponent).detail("gamma", gamma_sum).detail("mu1", mu1).detail("threshold", threshold);
    p.exponent = Some(exponent);
    Ok(p)
}

/// Constants of the power-law cycle asymptotics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawConstants {
    pub kappa: f64,
    /// The first assembled form, in terms of `tau`; equal to `kappa` when
    /// the two displayed forms agree.
    pub kappa_tau_form: f64,
    pub tau: f64,
    pub exponent: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 2.0 && beta < 3.0) {
        return Err(Error::Domain(format!("power-law cycles need 2 < beta < 3, got {beta}")));
    }
    Ok(())
}

pub fn power_law_constants(beta: f64, l: usize) -> Result<PowerLawConstants> {
    check_beta(beta)?;
    if l < 3 {
        return Err(Error::Domain("cycle length must be at least 3".into()));
    }
    let lf = l as f64;
    let (z0, z1) = (zeta(beta)?, zeta(beta - 1.0)?);
    let g1 = gamma(1.0 - beta)?;
    let g3 = gamma(3.0 - beta)?;
    let ga = gamma((beta - 2.0) / (beta - 1.0))?;
    let gb = gamma(((3.0 - beta) * lf + beta - 2.0) / (beta - 1.0))?;
    let pre = (-2.0 * ln_factorial(l as u64) - lf * 2f64.ln()).exp();
    let e = (beta - 3.0) / (beta - 1.0) * lf;
    let kappa = pre * (z0 / g1).powf(e) * ga / gb * (g3 / z1).powf(lf);
    let tau = (z1 - z0) / g1;
    let kappa_tau_form =
        pre * tau.powf(e) * (z1 / z0 - 1.0).powf(-e) * ga / gb * (g3 / z1).powf(lf);
    Ok(PowerLawConstants { kappa, kappa_tau_form, tau, exponent: (3.0 - beta) / (beta - 1.0) * lf })
}

/// `m` such that the mean degree `2m/n` equals `zeta(beta-1)/zeta(beta)`.
pub fn power_law_edges(beta: f64, n: usize) -> Result<usize> {
    Ok((n as f64 * zeta(beta - 1.0)? / (2.0 * zeta(beta)?)).round() as usize)
}

/// `kappa_{beta,l} n^{(3-beta) l / (beta-1)}`.
///
/// `kappa_iso_closed` rescales by `l!^2 2^l / (2l)`, the ratio between the
/// class EGF of an `l`-cycle and the monomial the constant is built on.
pub fn power_law_cycle_prediction(beta: f64, l: usize, n: usize) -> Result<Prediction> {
    let c = power_law_constants(beta, l)?;
    let m = power_law_edges(beta, n)?;
    let rho_log = if 2 * m > n { -(n as f64) / (2.0 * m as f64 - n as f64) * zeta(beta)?.ln() } else { f64::NAN };
    let rescale = (2.0 * ln_factorial(l as u64) + l as f64 * 2f64.ln()).exp() / (2.0 * l as f64);
    let mut p = Prediction::new("power-law-cycles", c.kappa * (n as f64).powf(c.exponent))
        .detail("kappa", c.kappa)
        .detail("kappa_tau_form", c.kappa_tau_form)
        .detail("kappa_iso_closed", c.kappa * rescale)
        .detail("tau", c.tau)
        .detail("ln_rho", rho_log)
        .detail("m", m as f64);
    p.exponent = Some(c.exponent);
    Ok(p)
}

/// `Delta(x) = x^r Omega(x^p)` with `p` the gcd of support differences.
#[derive(Clone, Debug)]
pub struct PeriodicDecomposition {
    pub r: u64,
    pub p: u64,
    base: WeightSpec,
}

/// How far an infinite support is scanned to find the period.
const PERIOD_SCAN: u64 = 64;

pub fn periodic_decompose(delta: &WeightSpec) -> Result<PeriodicDecomposition> {
    delta.validate()?;
    let r = delta.min_support();
    let end = delta.max_support().unwrap_or(r + PERIOD_SCAN);
    let p = (r..=end).filter(|&d| delta.is_positive(d)).fold(0, |g, d| num_integer::gcd(g, d - r));
    Ok(PeriodicDecomposition { r, p: p.max(1), base: delta.clone() })
}

/// `Omega_d(y) = sum_k delta_{r+pk} / (r+pk-d)! y^k`; `d = 0` gives `Omega`.
#[derive(Clone, Debug)]
pub struct OmegaSeries<'a> {
    dec: &'a PeriodicDecomposition,
    d: u32,
}

impl CoefficientSequence for OmegaSeries<'_> {
    fn log_coef(&self, k: u64) -> f64 {
        let e = self.dec.r + self.dec.p * k;
        if e < self.d as u64 {
            return f64::NEG_INFINITY;
        }
        self.dec.base.log_coef(e) + ln_factorial(e) - ln_factorial(e - self.d as u64)
    }

    fn min_support(&self) -> u64 {
        (0..).find(|&k| self.log_coef(k).is_finite()).unwrap_or(0)
    }

    fn max_support(&self) -> Option<u64> {
        self.dec.base.max_support().map(|e| (e - self.dec.r) / self.dec.p)
    }

    fn radius(&self) -> f64 {
        self.dec.base.radius().powf(self.dec.p as f64)
    }
}

impl PeriodicDecomposition {
    pub fn omega(&self, d: u32) -> OmegaSeries<'_> {
        OmegaSeries { dec: self, d }
    }

    /// Exact `Omega_d` coefficients up to `y^cap` for rational weights.
    pub fn omega_exact(&self, d: u32, cap: u64) -> Result<Vec<BigRational>> {
        (0..=cap)
            .map(|k| {
                let e = self.r + self.p * k;
                if e < d as u64 {
                    return Ok(BigRational::zero());
                }
                let delta = self.base.exact_delta(e as usize).ok_or_else(|| Error::Domain("weights are not rational".into()))?;
                let f: BigInt = (1..=e - d as u64).map(BigInt::from).product();
                Ok(delta / BigRational::from_integer(f))
            })
            .collect()
    }
}

/// `E_n = F(n, 1/(2m), (Omega_d(chi)/Omega(chi))_d)` with
/// `chi Omega'(chi)/Omega(chi) = (2m - nr)/(pn)`. Zero, with a diagnostic,
/// when `p` does not divide `2m - nr`.
pub fn periodic_expectation(f: &Graph, n: usize, m: usize, delta: &WeightSpec) -> Result<Prediction> {
    let dec = periodic_decompose(delta)?;
    let total = 2 * m as i128 - n as i128 * dec.r as i128;
    let mut p = Prediction::new("periodic-expectation", 0.0).detail("r", dec.r as f64).detail("p", dec.p as f64);
    if total < 0 || total % dec.p as i128 != 0 {
        p.diagnostic = Some(format!("p = {} does not divide 2m - nr = {total}; no such multigraphs", dec.p));
        return Ok(p);
    }
    let target = total as f64 / (dec.p as f64 * n as f64);
    let omega = dec.omega(0);
    let degs = f.degrees();
    let top = degs.iter().copied().max().unwrap_or(0);
    let lo = omega.min_support() as f64;
    let hi = omega.max_support().map(|v| v as f64);
    let ratios: Vec<f64> = if target == lo || Some(target) == hi {
        // a single admissible degree: Omega and Omega_d are monomials there
        let k = target as u64;
        (0..=top).map(|d| (dec.omega(d).log_coef(k) - omega.log_coef(k)).exp()).collect()
    } else {
        let chi = solve_tuning_seq(&omega, target)?;
        p = p.detail("chi", chi);
        let base = omega.log_eval(0, chi);
        (0..=top).map(|d| (dec.omega(d).log_eval(0, chi) - base).exp()).collect()
    };
    let aut = aut_count(f)? as f64;
    let log_scale = f.n() as f64 * (n as f64).ln() - f.m() as f64 * (2.0 * m as f64).ln();
    p.value = log_scale.exp() * degs.iter().map(|&d| ratios[d as usize]).product::<f64>() / aut;
    Ok(p)
}
