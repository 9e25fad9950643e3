//! Exact counting formulas evaluated on truncated series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{aut_count, is_isomorphic, Graph, GraphKind};
use crate::oracle::patchwork_series;
use crate::series::{TruncatedSeries, Var, UNBOUNDED};
use crate::weights::WeightSpec;

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn binom(n: &BigInt, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    r
}

/// The EGF of the isomorphism class of one shape:
/// `coef * z^n w^m * prod_v y_{deg v}` with `coef = 1/aut`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassTerm {
    pub coef: BigRational,
    pub n: usize,
    pub m: usize,
    pub degrees: Vec<u32>,
}

pub fn class_egf(shape: &Graph) -> Result<ClassTerm> {
    let aut = aut_count(shape)?;
    Ok(ClassTerm {
        coef: BigRational::new(BigInt::one(), BigInt::from(aut)),
        n: shape.n(),
        m: shape.m(),
        degrees: shape.degrees(),
    })
}

impl ClassTerm {
    /// The term as a series; `marks` adds the degree marks `y_d`.
    pub fn to_series(&self, z_cap: u32, w_cap: u32, marks: bool) -> TruncatedSeries {
        let mut exps = vec![(Var::Z, self.n as u32), (Var::W, self.m as u32)];
        if marks {
            for &d in &self.degrees {
                exps.push((Var::Y(d), 1));
            }
        }
        TruncatedSeries::monomial(self.coef.clone(), &exps, &[(Var::Z, z_cap), (Var::W, w_cap)])
    }
}

/// Pairwise non-isomorphic shapes of one kind with rational weights.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    kind: GraphKind,
    members: Vec<(Graph, BigRational)>,
}

impl FamilySpec {
    pub fn new(kind: GraphKind, shapes: Vec<Graph>) -> Result<Self> {
        Self::weighted(kind, shapes.into_iter().map(|g| (g, BigRational::one())).collect())
    }

    pub fn single(shape: Graph) -> Result<Self> {
        Self::new(shape.kind(), vec![shape])
    }

    pub fn empty(kind: GraphKind) -> Self {
        FamilySpec { kind, members: Vec::new() }
    }

    pub fn weighted(kind: GraphKind, members: Vec<(Graph, BigRational)>) -> Result<Self> {
        for (i, (g, _)) in members.iter().enumerate() {
            if g.kind() != kind {
                return Err(Error::KindMismatch("family member of the wrong kind".into()));
            }
            if members[..i].iter().any(|(h, _)| is_isomorphic(g, h)) {
                return Err(Error::InvalidGraph("family members must be pairwise non-isomorphic".into()));
            }
        }
        Ok(FamilySpec { kind, members })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn shapes(&self) -> Vec<Graph> {
        self.members.iter().map(|(g, _)| g.clone()).collect()
    }

    pub fn members(&self) -> &[(Graph, BigRational)] {
        &self.members
    }

    /// Class terms with the member weights folded into the coefficients.
    pub fn terms(&self) -> Result<Vec<ClassTerm>> {
        self.members
            .iter()
            .map(|(g, w)| {
                let mut t = class_egf(g)?;
                t.coef *= w;
                Ok(t)
            })
            .collect()
    }

    pub fn egf(&self, z_cap: u32, w_cap: u32, marks: bool) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::zero().with_cap(Var::Z, z_cap).with_cap(Var::W, w_cap);
        for t in self.terms()? {
            s = s.add(&t.to_series(z_cap, w_cap, marks));
        }
        Ok(s)
    }
}

fn need(kind: GraphKind, family: &FamilySpec) -> Result<()> {
    if family.kind != kind {
        return Err(Error::KindMismatch(format!("expected a {kind:?} family")));
    }
    Ok(())
}

fn check_size(n: usize, m: usize) -> Result<(u32, u32)> {
    let ok = |v: usize| u32::try_from(v).ok().filter(|&v| v < UNBOUNDED / 4);
    match (ok(n), ok(m)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::CapExceeded("series caps too large".into())),
    }
}

/// `n^{2m}`.
pub fn mg_total(n: usize, m: usize) -> BigInt {
    BigInt::from(n).pow(2 * m as u32)
}

/// `binom(binom(n,2), m)`.
pub fn sg_total(n: usize, m: usize) -> BigInt {
    let pairs = BigInt::from(n * n.saturating_sub(1) / 2);
    if BigInt::from(m) > pairs {
        return BigInt::zero();
    }
    binom(&pairs, m)
}

fn exp_z(n: u32) -> Result<TruncatedSeries> {
    TruncatedSeries::var(Var::Z, n).exp()
}

/// `e^{n^2 w / 2}` truncated at `w^m`.
fn exp_edges(n: usize, m: u32) -> Result<TruncatedSeries> {
    TruncatedSeries::var(Var::W, m).scale(&BigRational::new(BigInt::from(n * n), BigInt::from(2))).exp()
}

/// `(1+w)^{binom(n,2)}` truncated at `w^m`.
fn one_plus_w_pow(n: usize, m: u32) -> TruncatedSeries {
    let base = TruncatedSeries::polynomial(Var::W, &[int(1), int(1)], m);
    base.pow((n * n.saturating_sub(1) / 2) as u64)
}

fn multi_norm(n: usize, m: usize) -> BigRational {
    int(factorial(n) * BigInt::from(2).pow(m as u32) * factorial(m))
}

/// `sum_G G[F]` over all canonical `(n, m)`-multigraphs:
/// `n! 2^m m! [z^n w^m] F(z,w) e^z e^{n^2 w/2}`.
pub fn mg_distinguished(n: usize, m: usize, family: &FamilySpec) -> Result<BigRational> {
    need(GraphKind::Multi, family)?;
    let (nc, mc) = check_size(n, m)?;
    let s = family.egf(nc, mc, false)?.mul(&exp_z(nc)?).mul(&exp_edges(n, mc)?);
    Ok(s.extract(&[(Var::Z, nc), (Var::W, mc)])? * multi_norm(n, m))
}

/// `sum_G G[F]` over all simple `(n, m)`-graphs:
/// `n! [z^n w^m] F(z, w/(1+w)) e^z (1+w)^{binom(n,2)}`.
pub fn sg_distinguished(n: usize, m: usize, family: &FamilySpec) -> Result<BigRational> {
    need(GraphKind::Simple, family)?;
    let (nc, mc) = check_size(n, m)?;
    let f = family.egf(nc, mc, false)?.substitute_w_over_1pw()?;
    let s = f.mul(&exp_z(nc)?).mul(&one_plus_w_pow(n, mc));
    Ok(s.extract(&[(Var::Z, nc), (Var::W, mc)])? * int(factorial(n)))
}

/// Total weight `MG_{n,m,Delta} = (2m)! [x^{2m}] Delta(x)^n`.
pub fn mg_weighted_total(n: usize, m: usize, delta: &WeightSpec) -> Result<BigRational> {
    let (_, mc) = check_size(n, m)?;
    let d = delta.series(2 * mc)?;
    Ok(d.pow(n as u64).extract(&[(Var::X, 2 * mc)])? * int(factorial(2 * m)))
}

/// Weighted distinguished total, evaluated term by term. For a class term
/// `c z^k w^l prod y_{d_v}` and `j = m - l`, the contribution is
/// `c n! 2^m m! / (n-k)! * (2j)!/(2^j j!) * [x^{2j}] prod_v Delta^{(d_v)}(x) Delta(x)^{n-k}`.
pub fn mg_distinguished_weighted(n: usize, m: usize, delta: &WeightSpec, family: &FamilySpec) -> Result<BigRational> {
    need(GraphKind::Multi, family)?;
    check_size(n, m)?;
    let mut total = BigRational::zero();
    for t in family.terms()? {
        if t.n > n || t.m > m {
            continue;
        }
        let j = m - t.m;
        let top = *t.degrees.iter().max().unwrap_or(&0);
        let cap = (2 * j) as u32;
        let base = delta.series(cap + top)?;
        let mut prod = base.with_cap(Var::X, cap).pow((n - t.n) as u64);
        for &d in &t.degrees {
            prod = prod.mul(&base.derivative(Var::X, d)?.with_cap(Var::X, cap));
        }
        let pairing = int(factorial(2 * j)) / int(BigInt::from(2).pow(j as u32) * factorial(j));
        let falling = int(factorial(n)) / int(factorial(n - t.n));
        let x = prod.extract(&[(Var::X, cap)])?;
        total += t.coef * falling * int(BigInt::from(2).pow(m as u32) * factorial(m)) * pairing * x;
    }
    Ok(total)
}

/// The same quantity through the full multivariate series
/// `F(z, w, dDelta(x)) e^{z Delta(x)}`, summing
/// `(2j)!/(2^j j!) [z^n w^{m-j} x^{2j}]` over `j`. Slower; kept as an
/// independent route.
pub fn mg_distinguished_weighted_multivariate(
    n: usize,
    m: usize,
    delta: &WeightSpec,
    family: &FamilySpec,
) -> Result<BigRational> {
    need(GraphKind::Multi, family)?;
    let (nc, mc) = check_size(n, m)?;
    let xcap = 2 * mc;
    let mut f = family.egf(nc, mc, true)?;
    let top = family.terms()?.iter().flat_map(|t| t.degrees.clone()).max().unwrap_or(0);
    let base = delta.series(xcap + top)?;
    for d in 0..=top {
        let dd = base.derivative(Var::X, d)?.with_cap(Var::X, xcap);
        f = f.substitute(Var::Y(d), &dd)?;
    }
    let zd = base.with_cap(Var::X, xcap).mul(&TruncatedSeries::var(Var::Z, nc));
    let s = f.mul(&zd.exp()?);
    let mut total = BigRational::zero();
    for j in 0..=m {
        let pairing = int(factorial(2 * j)) / int(BigInt::from(2).pow(j as u32) * factorial(j));
        total += pairing * s.coeff(&[(Var::Z, nc), (Var::W, (m - j) as u32), (Var::X, 2 * j as u32)]);
    }
    Ok(total * multi_norm(n, m))
}

/// Expected number of family copies: distinguished total over total weight.
/// Weights apply to the multigraph model only.
pub fn expected_count(n: usize, m: usize, family: &FamilySpec, delta: Option<&WeightSpec>) -> Result<BigRational> {
    let (num, den) = match (family.kind, delta) {
        (GraphKind::Multi, None) => (mg_distinguished(n, m, family)?, int(mg_total(n, m))),
        (GraphKind::Simple, None) => (sg_distinguished(n, m, family)?, int(sg_total(n, m))),
        (GraphKind::Multi, Some(d)) => (mg_distinguished_weighted(n, m, d, family)?, mg_weighted_total(n, m, d)?),
        (GraphKind::Simple, Some(_)) => {
            return Err(Error::KindMismatch("degree weights apply to multigraphs".into()));
        }
    };
    if den.is_zero() {
        return Err(Error::ZeroWeight);
    }
    Ok(num / den)
}

/// Number of hosts with exactly `t` copies, for every `t`, from the
/// patchwork series: `[u^t] Patch(z, w, u-1) e^z e^{n^2 w/2}` (multigraphs)
/// or `[u^t] Patch(z, w/(1+w), u-1) e^z (1+w)^{binom(n,2)}` (simple graphs).
pub fn exactly_t_distribution(n: usize, m: usize, f: &Graph, kind: GraphKind) -> Result<BTreeMap<u64, BigRational>> {
    if f.kind() != kind {
        return Err(Error::KindMismatch("pattern kind differs from the model".into()));
    }
    let (nc, mc) = check_size(n, m)?;
    let patch = patchwork_series(f, n, m, None, kind, false)?;
    let shifted = patch.substitute(Var::U, &TruncatedSeries::polynomial(Var::U, &[int(-1), int(1)], UNBOUNDED))?;
    let (s, norm) = match kind {
        GraphKind::Multi => (shifted.mul(&exp_z(nc)?).mul(&exp_edges(n, mc)?), multi_norm(n, m)),
        GraphKind::Simple => {
            let p = shifted.substitute_w_over_1pw()?;
            (p.mul(&exp_z(nc)?).mul(&one_plus_w_pow(n, mc)), int(factorial(n)))
        }
    };
    let slice = s.slice(Var::Z, nc).slice(Var::W, mc);
    let mut out = BTreeMap::new();
    for (e, c) in slice.terms() {
        let t = e.iter().find(|(v, _)| *v == Var::U).map_or(0, |&(_, k)| k);
        out.insert(t as u64, c * &norm);
    }
    Ok(out)
}

pub fn count_with_exactly_t(n: usize, m: usize, f: &Graph, t: u64, kind: GraphKind) -> Result<BigRational> {
    Ok(exactly_t_distribution(n, m, f, kind)?.remove(&t).unwrap_or_else(BigRational::zero))
}

pub fn f_free_count(n: usize, m: usize, f: &Graph, kind: GraphKind) -> Result<BigRational> {
    count_with_exactly_t(n, m, f, 0, kind)
}

/// Lossy conversion for reporting.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
