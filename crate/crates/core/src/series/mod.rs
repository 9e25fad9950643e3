//! Truncated multivariate power series with exact rational coefficients.
//!
//! Every variable carries a cap: coefficients with a larger exponent are
//! unknown and never stored. [`UNBOUNDED`] marks a variable in which the
//! series is an exact polynomial.

mod lagrange;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use lagrange::lagrange_identity_check;

pub const UNBOUNDED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z,
    W,
    X,
    U,
    T,
    /// Degree mark `y_d`.
    Y(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => f.write_str("z"),
            Var::W => f.write_str("w"),
            Var::X => f.write_str("x"),
            Var::U => f.write_str("u"),
            Var::T => f.write_str("t"),
            Var::Y(d) => write!(f, "y{d}"),
        }
    }
}

type Exps = Vec<u32>;

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    vars: Vec<Var>,
    caps: Vec<u32>,
    terms: BTreeMap<Exps, BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TruncatedSeries {
    pub fn zero() -> Self {
        TruncatedSeries { vars: Vec::new(), caps: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut s = Self::zero();
        if !c.is_zero() {
            s.terms.insert(Vec::new(), c);
        }
        s
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The series `v` truncated at `cap`.
    pub fn var(v: Var, cap: u32) -> Self {
        Self::monomial(BigRational::one(), &[(v, 1)], &[(v, cap)])
    }

    /// `coef * prod v^e`, with caps for the listed variables. Exponent
    /// variables without a listed cap are unbounded.
    pub fn monomial(coef: BigRational, exps: &[(Var, u32)], caps: &[(Var, u32)]) -> Self {
        Self::from_terms(caps, [(exps.to_vec(), coef)])
    }

    pub fn from_terms(
        caps: &[(Var, u32)],
        terms: impl IntoIterator<Item = (Vec<(Var, u32)>, BigRational)>,
    ) -> Self {
        let terms: Vec<(Vec<(Var, u32)>, BigRational)> = terms.into_iter().collect();
        let mut cap_map: BTreeMap<Var, u32> = BTreeMap::new();
        for (e, _) in &terms {
            for &(v, _) in e {
                cap_map.entry(v).or_insert(UNBOUNDED);
            }
        }
        for &(v, c) in caps {
            cap_map.insert(v, c);
        }
        let vars: Vec<Var> = cap_map.keys().copied().collect();
        let caps: Vec<u32> = cap_map.values().copied().collect();
        let mut s = TruncatedSeries { vars, caps, terms: BTreeMap::new() };
        for (e, c) in terms {
            let mut exps = vec![0; s.vars.len()];
            for (v, k) in e {
                exps[s.index(v).expect("registered")] += k;
            }
            s.add_term(exps, c);
        }
        s
    }

    /// Univariate polynomial `sum coeffs[k] v^k`, truncated at `cap`.
    pub fn polynomial(v: Var, coeffs: &[BigRational], cap: u32) -> Self {
        Self::from_terms(&[(v, cap)], coeffs.iter().enumerate().map(|(k, c)| (vec![(v, k as u32)], c.clone())))
    }

    fn index(&self, v: Var) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    fn fits(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
    }

    fn add_term(&mut self, exps: Exps, c: BigRational) {
        if c.is_zero() || !self.fits(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Cap of `v`; variables the series does not mention are unbounded.
    pub fn cap(&self, v: Var) -> u32 {
        self.index(v).map_or(UNBOUNDED, |i| self.caps[i])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<(Var, u32)>, &BigRational)> + '_ {
        self.terms.iter().map(move |(e, c)| {
            let named = self.vars.iter().zip(e).filter(|(_, &k)| k > 0).map(|(&v, &k)| (v, k)).collect();
            (named, c)
        })
    }

    /// Coefficient of the given monomial; unlisted variables have exponent 0.
    pub fn coeff(&self, exps: &[(Var, u32)]) -> BigRational {
        let mut key = vec![0; self.vars.len()];
        for &(v, k) in exps {
            match self.index(v) {
                Some(i) => key[i] += k,
                None if k == 0 => {}
                None => return BigRational::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Like [`coeff`](Self::coeff), but an exponent above its cap is an error.
    pub fn extract(&self, exps: &[(Var, u32)]) -> Result<BigRational> {
        for &(v, k) in exps {
            let cap = self.cap(v);
            if k > cap {
                return Err(Error::Series(format!("exponent {k} of {v} above cap {cap}")));
            }
        }
        Ok(self.coeff(exps))
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&[])
    }

    /// Re-expresses the series over `vars` (a sorted superset) with `caps`,
    /// dropping terms beyond the new caps.
    fn embed(&self, vars: &[Var], caps: &[u32]) -> TruncatedSeries {
        let pos: Vec<usize> = self.vars.iter().map(|v| vars.binary_search(v).expect("superset")).collect();
        let mut out = TruncatedSeries { vars: vars.to_vec(), caps: caps.to_vec(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut k = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                k[pos[i]] = x;
            }
            out.add_term(k, c.clone());
        }
        out
    }

    fn joint(&self, other: &Self) -> (Vec<Var>, Vec<u32>) {
        let mut vars: Vec<Var> = self.vars.iter().chain(&other.vars).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        let caps = vars.iter().map(|&v| self.cap(v).min(other.cap(v))).collect();
        (vars, caps)
    }

    /// Adds or changes the cap of `v`, truncating as needed.
    pub fn with_cap(&self, v: Var, cap: u32) -> Self {
        let mut vars = self.vars.clone();
        if let Err(i) = vars.binary_search(&v) {
            vars.insert(i, v);
        }
        let caps: Vec<u32> = vars.iter().map(|&w| if w == v { cap } else { self.cap(w) }).collect();
        self.embed(&vars, &caps)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = TruncatedSeries { vars: self.vars.clone(), caps: self.caps.clone(), terms: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (vars, caps) = self.joint(other);
        let mut out = self.embed(&vars, &caps);
        for (e, c) in other.embed(&vars, &caps).terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (vars, caps) = self.joint(other);
        let a = self.embed(&vars, &caps);
        let b = other.embed(&vars, &caps);
        let mut acc: HashMap<Exps, BigRational> = HashMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if !e.iter().zip(&caps).all(|(x, c)| x <= c) {
                    continue;
                }
                let p = ca * cb;
                acc.entry(e).and_modify(|s| *s += &p).or_insert(p);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        TruncatedSeries { vars, caps, terms }
    }

    /// Multiplies by `v^k`; the cap of `v` rises by `k` since the shift is exact.
    pub fn shift(&self, v: Var, k: u32) -> Self {
        let base = self.with_cap(v, self.cap(v));
        let i = base.index(v).expect("present");
        let mut out = base.clone();
        out.caps[i] = base.caps[i].saturating_add(k);
        out.terms = base
            .terms
            .into_iter()
            .map(|(mut e, c)| {
                e[i] += k;
                (e, c)
            })
            .collect();
        out
    }

    fn check_nilpotent(&self) -> Result<()> {
        if !self.constant_term().is_zero() {
            return Err(Error::Series("argument has a nonzero constant term".into()));
        }
        for e in self.terms.keys() {
            let bounded = e.iter().zip(&self.caps).any(|(&k, &c)| k > 0 && c != UNBOUNDED);
            if !bounded {
                return Err(Error::Series("argument is not nilpotent under the caps".into()));
            }
        }
        Ok(())
    }

    /// `sum A^k / k!`.
    pub fn exp(&self) -> Result<Self> {
        self.check_nilpotent()?;
        let mut out = Self::one().embed(&self.vars, &self.caps);
        let mut term = out.clone();
        let mut k = 1;
        loop {
            term = term.mul(self).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
            k += 1;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::one().embed(&self.vars, &self.caps);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `d`-th formal derivative in `v`. The cap of `v` drops by `d`.
    pub fn derivative(&self, v: Var, d: u32) -> Result<Self> {
        let Some(i) = self.index(v) else {
            return Ok(if d == 0 { self.clone() } else { Self::zero() });
        };
        let cap = self.caps[i];
        if cap != UNBOUNDED && d > cap {
            return Err(Error::Series(format!("derivative of order {d} exceeds cap {cap} of {v}")));
        }
        let mut out = TruncatedSeries { vars: self.vars.clone(), caps: self.caps.clone(), terms: BTreeMap::new() };
        if cap != UNBOUNDED {
            out.caps[i] = cap - d;
        }
        for (e, c) in &self.terms {
            if e[i] < d {
                continue;
            }
            let falling: BigInt = (0..d).map(|j| BigInt::from(e[i] - j)).product();
            let mut k = e.clone();
            k[i] -= d;
            out.add_term(k, c * BigRational::from_integer(falling));
        }
        Ok(out)
    }

    /// Coefficient of `v^k` as a series in the remaining variables.
    pub fn slice(&self, v: Var, k: u32) -> Self {
        let Some(i) = self.index(v) else {
            return if k == 0 { self.clone() } else { Self::zero() };
        };
        let mut vars = self.vars.clone();
        let mut caps = self.caps.clone();
        vars.remove(i);
        caps.remove(i);
        let mut out = TruncatedSeries { vars, caps, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut r = e.clone();
                r.remove(i);
                out.terms.insert(r, c.clone());
            }
        }
        out
    }

    /// Replaces `v` by the series `repl`.
    ///
    /// If `repl` has zero constant term, the output is known up to the
    /// smaller of `repl`'s caps and the cap of `v`. A `repl` with a nonzero
    /// constant term needs the series to be an exact polynomial in `v`.
    pub fn substitute(&self, v: Var, repl: &Self) -> Result<Self> {
        let Some(i) = self.index(v) else {
            return Ok(self.clone());
        };
        let src_cap = self.caps[i];
        let mut repl = repl.clone();
        if repl.constant_term().is_zero() {
            if src_cap != UNBOUNDED {
                for w in repl.vars.clone() {
                    let c = repl.cap(w).min(src_cap);
                    repl = repl.with_cap(w, c);
                }
            }
        } else if src_cap != UNBOUNDED {
            return Err(Error::Series(format!(
                "substituting a series with nonzero constant term into truncated variable {v}"
            )));
        }
        let max_k = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        let mut out = self.slice(v, 0).mul(&Self::one().embed(&repl.vars, &repl.caps));
        let mut power = Self::one();
        for k in 1..=max_k {
            power = power.mul(&repl);
            let s = self.slice(v, k);
            if !s.is_zero() {
                out = out.add(&s.mul(&power));
            }
        }
        Ok(out)
    }

    /// Replaces `v` by a rational constant; `v` must be unbounded.
    pub fn evaluate(&self, v: Var, value: &BigRational) -> Result<Self> {
        self.substitute(v, &Self::constant(value.clone()))
    }

    /// `w -> w/(1+w)`, truncated at the series' own `w` cap.
    pub fn substitute_w_over_1pw(&self) -> Result<Self> {
        self.geometric_substitution(-1)
    }

    /// `w -> w/(1-w)`, the inverse of [`substitute_w_over_1pw`](Self::substitute_w_over_1pw).
    pub fn substitute_w_over_1mw(&self) -> Result<Self> {
        self.geometric_substitution(1)
    }

    fn geometric_substitution(&self, sign: i64) -> Result<Self> {
        let cap = self.cap(Var::W);
        if !self.terms().any(|(e, _)| e.iter().any(|&(v, k)| v == Var::W && k > 0)) {
            return Ok(self.clone());
        }
        if cap == UNBOUNDED {
            return Err(Error::Series("w must have a finite cap".into()));
        }
        let coeffs: Vec<BigRational> =
            (0..=cap).map(|k| if k == 0 { q(0) } else { q(sign.pow(k - 1)) }).collect();
        self.substitute(Var::W, &Self::polynomial(Var::W, &coeffs, cap))
    }

    /// Multiplicative inverse; needs a nonzero constant term and every other
    /// term nilpotent under the caps.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Series("inverse needs a nonzero constant term".into()));
        }
        let rest = self.sub(&Self::constant(c.clone()));
        rest.check_nilpotent()?;
        let neg = rest.scale(&(-c.recip()));
        let mut out = Self::one().embed(&self.vars, &self.caps);
        let mut term = out.clone();
        loop {
            term = term.mul(&neg);
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out.scale(&c.recip()))
    }

    /// JSON object mapping monomials like `"z^2*w"` to coefficient strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in self.terms() {
            map.insert(monomial_name(&e), serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

fn monomial_name(e: &[(Var, u32)]) -> String {
    if e.is_empty() {
        return "1".into();
    }
    e.iter()
        .map(|&(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl PartialEq for TruncatedSeries {
    /// Coefficient-wise equality, ignoring caps.
    fn eq(&self, other: &Self) -> bool {
        let (vars, _) = self.joint(other);
        let caps = vec![UNBOUNDED; vars.len()];
        self.embed(&vars, &caps).terms == other.embed(&vars, &caps).terms
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if e.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&monomial_name(&e))?;
            } else {
                write!(f, "{a}*{}", monomial_name(&e))?;
            }
        }
        Ok(())
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&q(-1))
    }
}
