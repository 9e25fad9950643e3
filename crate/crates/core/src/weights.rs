//! Degree-weight sequences `delta` and their exponential generating
//! functions `Delta(x) = sum delta_d x^d / d!`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{TruncatedSeries, Var};
use crate::special::{ln_factorial, zeta};

/// Nonnegative coefficient sequence `a_d` of a power series, given in log
/// space. Weight specs and their periodic re-indexings both implement it, so
/// tuning and evaluation are shared.
pub trait CoefficientSequence {
    /// `ln a_d`, or `-inf` when `a_d = 0`.
    fn log_coef(&self, d: u64) -> f64;
    fn min_support(&self) -> u64;
    /// `None` for infinite support.
    fn max_support(&self) -> Option<u64>;
    /// Radius of convergence (`f64::INFINITY` for entire series).
    fn radius(&self) -> f64 {
        f64::INFINITY
    }

    /// `ln f^(k)(x)` for `x > 0`, by streaming log-sum-exp over terms.
    fn log_eval(&self, k: u32, x: f64) -> f64 {
        log_eval_terms(self, k, x)
    }

    fn eval(&self, k: u32, x: f64) -> f64 {
        self.log_eval(k, x).exp()
    }

    /// `x f'(x) / f(x)`, the mean of the tilted distribution.
    fn psi(&self, x: f64) -> f64 {
        x * (self.log_eval(1, x) - self.log_eval(0, x)).exp()
    }
}

const TERM_CAP: u64 = 200_000_000;

pub(crate) fn log_eval_terms<S: CoefficientSequence + ?Sized>(s: &S, k: u32, x: f64) -> f64 {
    let lx = x.ln();
    let start = s.min_support().max(k as u64);
    let end = s.max_support().unwrap_or(u64::MAX);
    let mut max = f64::NEG_INFINITY;
    let mut acc = 0.0;
    let mut d = start;
    while d <= end && d < TERM_CAP {
        let c = s.log_coef(d);
        if c.is_finite() {
            let l = c + ln_factorial(d) - ln_factorial(d - k as u64) + (d - k as u64) as f64 * lx;
            if l > max {
                acc = acc * (max - l).exp() + 1.0;
                max = l;
            } else {
                acc += (l - max).exp();
                // Past the peak and negligible: stop. The terms of every
                // supported sequence are eventually log-concave in d.
                if l < max - 40.0 && (d as f64) > 2.0 * x + 64.0 {
                    break;
                }
            }
        }
        d += 1;
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + acc.ln()
}

/// The weight sequence `delta` of a degree-weighted multigraph model.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// `delta_0 ..= delta_D`, zero beyond.
    Finite(Vec<BigRational>),
    /// `delta_d = 1`: `Delta = e^x`.
    Exponential,
    /// Even degrees only: `Delta = cosh x`.
    Cosh,
    /// `delta_0 = 1`, odd degrees 1: `Delta = sinh x + 1`.
    SinhPlusOne,
    /// `delta_d = d^(-beta) d!` for `d >= 1`, `delta_0 = 0`.
    PowerLaw(f64),
}

impl WeightSpec {
    pub fn finite(delta: &[i64]) -> Self {
        WeightSpec::Finite(delta.iter().map(|&d| BigRational::from_integer(BigInt::from(d))).collect())
    }

    /// Weights with `Delta(x) = sum_{k<=deg} x^k/k!`, i.e. all `delta_d = 1` up to `deg`.
    pub fn truncated_exp(deg: usize) -> Self {
        WeightSpec::finite(&vec![1; deg + 1])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Finite(v) => {
                if v.iter().any(|d| d.is_negative()) {
                    return Err(Error::Domain("weights must be nonnegative".into()));
                }
                if v.iter().all(|d| d.is_zero()) {
                    return Err(Error::Domain("weight support is empty".into()));
                }
            }
            WeightSpec::PowerLaw(b) => {
                if !(*b > 1.0) {
                    return Err(Error::Domain(format!("power law needs beta > 1, got {b}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// `delta_d` exactly, where it is rational.
    pub fn exact_delta(&self, d: usize) -> Option<BigRational> {
        let one = BigRational::one;
        let zero = BigRational::zero;
        Some(match self {
            WeightSpec::Finite(v) => v.get(d).cloned().unwrap_or_else(zero),
            WeightSpec::Exponential => one(),
            WeightSpec::Cosh => if d % 2 == 0 { one() } else { zero() },
            WeightSpec::SinhPlusOne => if d == 0 || d % 2 == 1 { one() } else { zero() },
            WeightSpec::PowerLaw(b) => {
                if d == 0 {
                    zero()
                } else if d == 1 {
                    one()
                } else if *b == b.floor() {
                    let fact: BigInt = (1..=d).map(BigInt::from).product();
                    let p = BigInt::from(d).pow(*b as u32);
                    BigRational::new(fact, p)
                } else {
                    return None;
                }
            }
        })
    }

    pub fn is_positive(&self, d: u64) -> bool {
        self.log_coef(d).is_finite()
    }

    /// `Delta(x)` as an exact truncated series in `x` up to `x^cap`.
    pub fn series(&self, cap: u32) -> Result<TruncatedSeries> {
        let mut coeffs = Vec::with_capacity(cap as usize + 1);
        let mut fact = BigInt::one();
        for d in 0..=cap as usize {
            if d > 0 {
                fact *= d;
            }
            let delta = self
                .exact_delta(d)
                .ok_or_else(|| Error::Domain("weights are not rational".into()))?;
            coeffs.push(delta / BigRational::from_integer(fact.clone()));
        }
        Ok(TruncatedSeries::polynomial(Var::X, &coeffs, cap))
    }

    /// Largest degree with nonzero weight, if finite.
    pub fn degree(&self) -> Option<usize> {
        self.max_support().map(|d| d as usize)
    }

    /// `Delta^(k)(1)` for a power law, `sum_j s(k,j) zeta(beta - j)` with signed
    /// Stirling numbers of the first kind. Infinite when `beta - k <= 1`.
    fn power_law_at_one(beta: f64, k: u32) -> f64 {
        if beta - k as f64 <= 1.0 {
            return f64::INFINITY;
        }
        let s = stirling_first_signed(k as usize);
        let mut sum = 0.0;
        for (j, c) in s.iter().enumerate() {
            if *c != 0 {
                sum += *c as f64 * zeta(beta - j as f64).expect("beta - j > 1");
            }
        }
        sum
    }
}

/// Row `k` of the signed Stirling numbers of the first kind: coefficients of
/// the falling factorial `d (d-1) ... (d-k+1)` in powers of `d`.
pub fn stirling_first_signed(k: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for i in 0..k {
        let mut next = vec![0i64; row.len() + 1];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= i as i64 * c;
        }
        row = next;
    }
    row
}

impl CoefficientSequence for WeightSpec {
    fn log_coef(&self, d: u64) -> f64 {
        match self {
            WeightSpec::Finite(v) => match v.get(d as usize) {
                Some(c) if c.is_positive() => c.to_f64().unwrap_or(f64::NAN).ln() - ln_factorial(d),
                _ => f64::NEG_INFINITY,
            },
            WeightSpec::Exponential => -ln_factorial(d),
            WeightSpec::Cosh => {
                if d % 2 == 0 {
                    -ln_factorial(d)
                } else {
                    f64::NEG_INFINITY
                }
            }
            WeightSpec::SinhPlusOne => {
                if d == 0 || d % 2 == 1 {
                    -ln_factorial(d)
                } else {
                    f64::NEG_INFINITY
                }
            }
            WeightSpec::PowerLaw(b) => {
                if d == 0 {
                    f64::NEG_INFINITY
                } else {
                    -b * (d as f64).ln()
                }
            }
        }
    }

    fn min_support(&self) -> u64 {
        match self {
            WeightSpec::Finite(v) => v.iter().position(|c| c.is_positive()).unwrap_or(0) as u64,
            WeightSpec::PowerLaw(_) => 1,
            _ => 0,
        }
    }

    fn max_support(&self) -> Option<u64> {
        match self {
            WeightSpec::Finite(v) => v.iter().rposition(|c| c.is_positive()).map(|d| d as u64),
            _ => None,
        }
    }

    fn radius(&self) -> f64 {
        match self {
            WeightSpec::PowerLaw(_) => 1.0,
            _ => f64::INFINITY,
        }
    }

    fn log_eval(&self, k: u32, x: f64) -> f64 {
        match self {
            WeightSpec::Exponential => x,
            WeightSpec::Cosh | WeightSpec::SinhPlusOne => {
                let even = (k % 2 == 0) == matches!(self, WeightSpec::Cosh);
                let v = if even { x.cosh() } else { x.sinh() };
                let extra = if k == 0 && matches!(self, WeightSpec::SinhPlusOne) { 1.0 } else { 0.0 };
                (v + extra).ln()
            }
            WeightSpec::PowerLaw(b) if x == 1.0 => Self::power_law_at_one(*b, k).ln(),
            WeightSpec::PowerLaw(_) if x > 1.0 => f64::INFINITY,
            _ => log_eval_terms(self, k, x),
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Finite(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "finite:[{}]", parts.join(","))
            }
            WeightSpec::Exponential => f.write_str("exp"),
            WeightSpec::Cosh => f.write_str("cosh"),
            WeightSpec::SinhPlusOne => f.write_str("sinh+1"),
            WeightSpec::PowerLaw(b) => write!(f, "powerlaw:{b}"),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Config(format!("bad rational {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(i));
    }
    let f: f64 = s.parse().map_err(|_| bad())?;
    BigRational::from_float(f).ok_or_else(bad)
}

impl FromStr for WeightSpec {
    type Err = Error;

    /// `finite:[1,1,1/2]` (the delta values), `exp`, `cosh`, `sinh+1` or
    /// `powerlaw:2.5`. Also accepts JSON strings of those forms.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_matches('"');
        let spec = match s {
            "exp" | "exponential" => WeightSpec::Exponential,
            "cosh" => WeightSpec::Cosh,
            "sinh+1" | "sinh_plus_one" => WeightSpec::SinhPlusOne,
            _ => {
                if let Some(rest) = s.strip_prefix("finite:") {
                    let inner = rest.trim().trim_start_matches('[').trim_end_matches(']');
                    let v = inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
                    WeightSpec::Finite(v)
                } else if let Some(rest) = s.strip_prefix("powerlaw:") {
                    let b: f64 = rest.trim().parse().map_err(|_| Error::Config(format!("bad beta {rest:?}")))?;
                    WeightSpec::PowerLaw(b)
                } else {
                    return Err(Error::Config(format!("unknown weight spec {s:?}")));
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl Serialize for WeightSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
