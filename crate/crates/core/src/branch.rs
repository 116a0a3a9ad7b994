//! Plane branches given by a parametrization `(x(t), y(t))`.
//!
//! Most invariants are read off a *prepared* branch: normalized
//! (`v(x) < v(y)`), `x` monic, and standardized to `x = t^{δ_0}`.
//! Branches typed in as polynomials are flagged exact; their precision can
//! be raised on demand, while truncated input is used as given.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::multseq::{self, MultiplicitySequence};
use crate::presentation;
use crate::semigroup::{self, NumericalSemigroup};
use crate::series::{eval_poly, BivariatePoly, Rational, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("both x and y are zero")]
    ZeroParametrization,
    #[error("{0} has a nonzero constant term")]
    ConstantTerm(&'static str),
    #[error("values of the branch have gcd {gcd}, not 1")]
    GcdNotOne { gcd: u64 },
    #[error("leading coefficient {0} of x is not 1")]
    NonMonic(Rational),
    #[error("x is not a pure power of t")]
    NotStandard,
    #[error("invalid characteristic exponents: {0}")]
    InvalidCharExponents(String),
    #[error("insufficient precision: need t^{needed}, known below t^{precision}")]
    InsufficientPrecision { needed: u64, precision: u64 },
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error(transparent)]
    Series(SeriesError),
}

impl From<SeriesError> for BranchError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::ZeroUpToPrecision { precision } => BranchError::InsufficientPrecision {
                needed: precision + 1,
                precision,
            },
            SeriesError::InsufficientPrecision { needed, precision } => {
                BranchError::InsufficientPrecision { needed, precision }
            }
            SeriesError::NonMonic(c) => BranchError::NonMonic(c),
            other => BranchError::Series(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, BranchError>;

/// Precision ceiling for exact inputs whose standardization keeps needing
/// more terms.
const MAX_PRECISION: u64 = 1 << 13;

/// `𝒪 = ℂ[[x, y]] ⊂ ℂ[[t]]`. A zero `y` marks a smooth branch after
/// normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneBranch {
    x: TruncatedSeries,
    y: TruncatedSeries,
    exact: bool,
}

impl PlaneBranch {
    /// Truncated parametrization: coefficients at or beyond the precision
    /// are unknown.
    pub fn new(x: TruncatedSeries, y: TruncatedSeries) -> Result<Self> {
        Self::build(x, y, false)
    }

    /// Polynomial parametrization: every coefficient not stored is zero.
    pub fn polynomial(x: TruncatedSeries, y: TruncatedSeries) -> Result<Self> {
        Self::build(x, y, true)
    }

    fn build(x: TruncatedSeries, y: TruncatedSeries, exact: bool) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(BranchError::ZeroParametrization);
        }
        if x.order() == Ok(0) {
            return Err(BranchError::ConstantTerm("x"));
        }
        if y.order() == Ok(0) {
            return Err(BranchError::ConstantTerm("y"));
        }
        let g = x
            .terms()
            .chain(y.terms())
            .fold(0u64, |acc, (e, _)| acc.gcd(&e));
        if g != 1 {
            return Err(BranchError::GcdNotOne { gcd: g });
        }
        Ok(Self { x, y, exact })
    }

    pub fn x(&self) -> &TruncatedSeries {
        &self.x
    }

    pub fn y(&self) -> &TruncatedSeries {
        &self.y
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn precision(&self) -> u64 {
        self.x.precision().min(self.y.precision())
    }

    /// Exact branches are re-read at `p` (never lowered); truncated ones are
    /// returned unchanged.
    pub fn with_precision(&self, p: u64) -> Self {
        if !self.exact {
            return self.clone();
        }
        Self {
            x: self.x.assume_exact_to(p),
            y: self.y.assume_exact_to(p),
            exact: true,
        }
    }

    /// Both series cut to precision `p`; the result is no longer exact.
    pub fn truncated(&self, p: u64) -> Self {
        Self {
            x: self.x.truncate(p),
            y: self.y.truncate(p),
            exact: false,
        }
    }

    /// The precision a written-out polynomial gets when none is declared.
    pub fn default_precision(&self) -> u64 {
        1 + self
            .x
            .max_exponent()
            .into_iter()
            .chain(self.y.max_exponent())
            .max()
            .unwrap_or(0)
    }

    fn with_series(&self, x: TruncatedSeries, y: TruncatedSeries, exact: bool) -> Self {
        Self { x, y, exact }
    }

    /// Evaluates a polynomial in this branch's `x`, `y`.
    pub fn eval(&self, poly: &BivariatePoly) -> TruncatedSeries {
        eval_poly(poly, &self.x, &self.y)
    }
}

/// `x = ...; y = ...`, with `; prec = N` unless the branch is an exact
/// polynomial at its default precision.
impl fmt::Display for PlaneBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}; y = {}", self.x, self.y)?;
        let same = self.x.precision() == self.y.precision();
        if !(self.exact && same && self.precision() == self.default_precision()) {
            write!(f, "; prec = {}", self.precision())?;
        }
        Ok(())
    }
}

/// `(δ_0, ..., δ_k)` with running gcds `d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharExponents {
    pub delta: Vec<u64>,
    pub d: Vec<u64>,
}

impl CharExponents {
    pub fn new(delta: Vec<u64>) -> Result<Self> {
        if delta.is_empty() || delta[0] == 0 {
            return Err(BranchError::InvalidCharExponents(
                "need a positive multiplicity".into(),
            ));
        }
        if delta.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BranchError::InvalidCharExponents(
                "exponents must increase".into(),
            ));
        }
        let d = semigroup::gcd_chain(&delta);
        if d.windows(2).any(|w| w[1] >= w[0]) || *d.last().unwrap() != 1 {
            return Err(BranchError::InvalidCharExponents(format!(
                "gcd chain {d:?} must drop at every step and end at 1"
            )));
        }
        Ok(Self { delta, d })
    }

    pub fn k(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn multiplicity(&self) -> u64 {
        self.delta[0]
    }

    /// Semigroup generators `δ̄_i = δ̄_{i-1} d_{i-2}/d_{i-1} + δ_i - δ_{i-1}`.
    pub fn deltabar(&self) -> Vec<u64> {
        let (delta, d) = (&self.delta, &self.d);
        let mut bars = delta.clone();
        for i in 2..delta.len() {
            bars[i] = bars[i - 1] * d[i - 2] / d[i - 1] + delta[i] - delta[i - 1];
        }
        bars
    }

    /// `Σ (d_{i-1} - d_i) δ_i + 1 - d_0`.
    pub fn conductor(&self) -> u64 {
        let s: u64 = (1..self.delta.len())
            .map(|i| (self.d[i - 1] - self.d[i]) * self.delta[i])
            .sum();
        s + 1 - self.d[0]
    }

    /// Characteristic exponents of the blowup, by the three cases
    /// `δ_0 < δ_1 - δ_0`, `δ_0 > δ_1 - δ_0` not a multiple, and multiple.
    pub fn after_blowup(&self) -> CharExponents {
        let delta = &self.delta;
        if delta.len() == 1 {
            return self.clone();
        }
        let (d0, d1) = (delta[0], delta[1]);
        let diff = d1 - d0;
        let next = if d0 < diff {
            let mut v = vec![d0];
            v.extend(delta[1..].iter().map(|&x| x - d0));
            v
        } else {
            let mut v = vec![diff];
            if d0 % diff != 0 {
                v.push(d0);
            }
            v.extend(delta[2..].iter().map(|&x| d0 + x - d1));
            v
        };
        CharExponents::new(next).expect("blowup exponents are valid")
    }
}

impl fmt::Display for CharExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.delta.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// Swaps and cancels until `v(x) < v(y)`; `y` becomes zero when the
/// branch is smooth with `x` of order 1.
pub fn normalize(b: &PlaneBranch) -> Result<PlaneBranch> {
    let (mut x, mut y) = (b.x.clone(), b.y.clone());
    if x.is_zero() || (!y.is_zero() && y.order()? < x.order()?) {
        std::mem::swap(&mut x, &mut y);
    }
    let ox = x.order()?;
    while !y.is_zero() {
        let (oy, cy) = y.leading()?;
        if oy > ox {
            break;
        }
        let c = cy / x.leading()?.1;
        y = y.sub(&x.scale(&c));
    }
    if y.is_zero() && ox > 1 {
        if b.exact {
            return Err(BranchError::GcdNotOne { gcd: ox });
        }
        return Err(BranchError::InsufficientPrecision {
            needed: y.precision() + 1,
            precision: y.precision(),
        });
    }
    Ok(b.with_series(x, y, b.exact))
}

/// Rescales `x` to leading coefficient 1 (same subring).
pub fn make_monic(b: &PlaneBranch) -> Result<PlaneBranch> {
    let lc = b.x.leading()?.1.clone();
    if lc.is_one() {
        return Ok(b.clone());
    }
    Ok(b.with_series(b.x.scale(&lc.recip()), b.y.clone(), b.exact))
}

/// Reparametrizes a normalized branch so that `x = t^{δ_0}` exactly.
pub fn standardize(b: &PlaneBranch) -> Result<PlaneBranch> {
    let (m, lc) = b.x.leading()?;
    if !lc.is_one() {
        return Err(BranchError::NonMonic(lc.clone()));
    }
    if b.x.is_monomial() {
        return Ok(b.clone());
    }
    let tau = b.x.formal_root(m)?;
    let sigma = tau.reversion()?;
    let y = if b.y.is_zero() {
        b.y.clone()
    } else {
        b.y.compose_with_tangent(&sigma)?
    };
    let x = TruncatedSeries::monomial(Rational::one(), m, b.x.precision());
    Ok(b.with_series(x, y, false))
}

/// Scans the support of `y` for the exponents where the gcd chain drops.
pub fn characteristic_exponents(b: &PlaneBranch) -> Result<CharExponents> {
    let (m, lc) = b.x.leading()?;
    if !b.x.is_monomial() || !lc.is_one() {
        return Err(BranchError::NotStandard);
    }
    if !b.y.is_zero() && b.y.order()? <= m {
        return Err(BranchError::NotStandard);
    }
    let mut delta = vec![m];
    let mut d = m;
    for (e, _) in b.y.terms() {
        if d == 1 {
            break;
        }
        let g = d.gcd(&e);
        if g < d {
            delta.push(e);
            d = g;
        }
    }
    if d != 1 {
        return Err(BranchError::GcdNotOne { gcd: d });
    }
    CharExponents::new(delta)
}

/// `normalize((x, y/x))` for a normalized branch.
pub fn blowup(b: &PlaneBranch) -> Result<PlaneBranch> {
    let y = if b.y.is_zero() {
        let (m, _) = b.x.leading()?;
        TruncatedSeries::zero(b.y.precision().saturating_sub(m).max(1))
    } else {
        b.y.div(&b.x)?
    };
    let exact = b.exact && b.x.is_monomial();
    normalize(&b.with_series(b.x.clone(), y, exact))
}

/// A normalized branch with monic `x`, its standard form and its
/// characteristic exponents, all at one working precision.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub normalized: PlaneBranch,
    pub standard: PlaneBranch,
    pub exps: CharExponents,
}

/// Normalizes and standardizes `b`, raising the precision of exact input
/// until the characteristic exponents are known and `need(exps)` terms are
/// available. Truncated input that falls short is an error.
pub fn prepare<F>(b: &PlaneBranch, need: F) -> Result<Prepared>
where
    F: Fn(&CharExponents) -> u64,
{
    let mut p = b.precision();
    if b.exact {
        // a long polynomial is first read at a modest precision
        let (ox, oy) = (b.x.order().unwrap_or(0), b.y.order().unwrap_or(0));
        p = p.min(4 * (ox + oy) + 8);
    }
    loop {
        // polynomial input with x = c t^m: nothing is lost by standardizing
        let definitive = !b.exact || (p >= b.precision() && b.x.is_monomial());
        let attempt = normalize(&view(b, p))
            .and_then(|n| make_monic(&n))
            .and_then(|n| {
                let s = standardize(&n)?;
                let e = characteristic_exponents(&s)?;
                Ok((n, s, e))
            });
        match attempt {
            Ok((normalized, standard, exps)) => {
                let needed = need(&exps);
                let have = standard.precision().min(normalized.precision());
                if have >= needed {
                    return Ok(Prepared {
                        normalized,
                        standard,
                        exps,
                    });
                }
                if !b.exact || needed > MAX_PRECISION {
                    return Err(BranchError::InsufficientPrecision {
                        needed,
                        precision: have,
                    });
                }
                // standardizing may cost precision, so always grow
                p = if needed > p { needed + (p - have) } else { 2 * p };
            }
            Err(BranchError::GcdNotOne { .. } | BranchError::InsufficientPrecision { .. })
                if !definitive && 2 * p <= MAX_PRECISION =>
            {
                p *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// An exact branch read at precision `p`: truncated below its own precision,
/// extended by zeros above it.
fn view(b: &PlaneBranch, p: u64) -> PlaneBranch {
    if b.exact && p < b.precision() {
        b.truncated(p)
    } else {
        b.with_precision(p)
    }
}

fn apery_precision(e: &CharExponents) -> u64 {
    e.conductor() + 2 * e.multiplicity()
}

/// Multiplicity sequence by iterated blowup, cross-checked against the
/// Euclidean blocks of the characteristic exponents.
pub fn multiplicity_sequence(b: &PlaneBranch) -> Result<MultiplicitySequence> {
    let prep = prepare(b, |e| e.delta.last().unwrap() + 1)?;
    let fast = multseq::from_char_exponents(&prep.exps);
    let slow = multiplicities_by_blowup(b, &prep, &fast)?;
    if slow != fast {
        return Err(BranchError::InternalMismatch(format!(
            "blowups give {slow}, characteristic exponents give {fast}"
        )));
    }
    Ok(fast)
}

/// Precision after which the blowup chain is known to resolve: each step
/// costs at most the current multiplicity, and the orders met stay below
/// the last characteristic exponent.
pub fn blowup_precision(exps: &CharExponents) -> u64 {
    let fast = multseq::from_char_exponents(exps);
    exps.delta.last().unwrap() + fast.expanded().iter().sum::<u64>() + 1
}

fn multiplicities_by_blowup(
    b: &PlaneBranch,
    prep: &Prepared,
    expected: &MultiplicitySequence,
) -> Result<MultiplicitySequence> {
    let guard = expected.len() + 1;
    let mut p = blowup_precision(&prep.exps);
    loop {
        let start = if b.exact {
            make_monic(&normalize(&view(b, p))?)?
        } else {
            prep.normalized.clone()
        };
        match blowup_chain(start, guard) {
            Err(BranchError::InsufficientPrecision { .. }) if b.exact && 2 * p <= MAX_PRECISION => {
                p *= 2;
            }
            other => return other,
        }
    }
}

fn blowup_chain(mut cur: PlaneBranch, guard: usize) -> Result<MultiplicitySequence> {
    let mut entries = Vec::new();
    loop {
        let m = cur.x.order()?;
        if m == 1 {
            break;
        }
        entries.push(m);
        if entries.len() > guard {
            return Err(BranchError::InternalMismatch(
                "blowup chain longer than predicted".into(),
            ));
        }
        cur = blowup(&cur)?;
    }
    MultiplicitySequence::from_entries(entries)
        .map_err(|e| BranchError::InternalMismatch(format!("multiplicities: {e}")))
}

/// An Apéry basis element `y_i` as a polynomial in `x`, `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperyBasisElement {
    pub poly: BivariatePoly,
    pub value: u64,
}

/// Apéry basis of the normalized branch with respect to `x`. Polynomials
/// are in the coordinates of [`normalize`] with `x` made monic.
pub fn apery_basis(b: &PlaneBranch) -> Result<Vec<AperyBasisElement>> {
    let prep = prepare(b, apery_precision)?;
    apery_basis_of(&prep.normalized)
}

fn poly_mul(a: &BivariatePoly, b: &BivariatePoly) -> BivariatePoly {
    let mut out = BivariatePoly::new();
    for (&(i, j), c) in a {
        for (&(k, l), d) in b {
            *out.entry((i + k, j + l)).or_insert_with(Rational::zero) += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `a - c x^q b`
fn poly_sub_shifted(a: &mut BivariatePoly, c: &Rational, q: u64, b: &BivariatePoly) {
    for (&(i, j), d) in b {
        *a.entry((i + q, j)).or_insert_with(Rational::zero) -= c * d;
    }
    a.retain(|_, c| !c.is_zero());
}

fn poly_scale(a: &BivariatePoly, c: &Rational) -> BivariatePoly {
    a.iter().map(|(&k, v)| (k, v * c)).collect()
}

fn monomial(a: u64, b: u64) -> BivariatePoly {
    BTreeMap::from([((a, b), Rational::one())])
}

/// Powers of one series, computed on demand.
struct PowerCache {
    base: TruncatedSeries,
    powers: Vec<TruncatedSeries>,
}

impl PowerCache {
    fn new(base: TruncatedSeries, precision: u64) -> Self {
        Self {
            base,
            powers: vec![TruncatedSeries::one(precision)],
        }
    }

    fn get(&mut self, n: u64) -> &TruncatedSeries {
        while self.powers.len() <= n as usize {
            let next = self.powers.last().unwrap().mul(&self.base);
            self.powers.push(next);
        }
        &self.powers[n as usize]
    }
}

fn apery_basis_of(n: &PlaneBranch) -> Result<Vec<AperyBasisElement>> {
    let m = n.x.order()?;
    let p = n.precision();
    let mut xp = PowerCache::new(n.x.clone(), p);
    let mut polys: Vec<BivariatePoly> = vec![monomial(0, 0)];
    let mut series: Vec<TruncatedSeries> = vec![TruncatedSeries::one(p)];
    let mut values: Vec<u64> = vec![0];
    // residue class mod m -> index of the basis element that owns it
    let mut owner: BTreeMap<u64, usize> = BTreeMap::from([(0, 0)]);
    for k in 1..m as usize {
        let (mut poly, mut cur) = if k == 1 {
            (monomial(0, 1), n.y.clone())
        } else {
            (
                poly_mul(&polys[1], &polys[k - 1]),
                series[1].mul(&series[k - 1]),
            )
        };
        let value = loop {
            let (o, lc) = cur.leading()?;
            let Some(&j) = owner.get(&(o % m)) else {
                break o;
            };
            if o < values[j] {
                return Err(BranchError::InternalMismatch(format!(
                    "order {o} below Apéry value {} of its class",
                    values[j]
                )));
            }
            let q = (o - values[j]) / m;
            let sub = xp.get(q).mul(&series[j]);
            let c = lc / sub.leading()?.1;
            cur = cur.sub(&sub.scale(&c));
            poly_sub_shifted(&mut poly, &c, q, &polys[j]);
        };
        if value <= values[k - 1] {
            return Err(BranchError::InternalMismatch(format!(
                "Apéry values not increasing at index {k}"
            )));
        }
        owner.insert(value % m, k);
        polys.push(poly);
        series.push(cur);
        values.push(value);
    }
    Ok(polys
        .into_iter()
        .zip(values)
        .map(|(poly, value)| AperyBasisElement { poly, value })
        .collect())
}

/// Budget (multiplicity times precision) under which the semigroup is
/// recomputed from an Apéry basis as a cross-check.
const CROSS_CHECK_BUDGET: u64 = 20_000;

/// Value semigroup generated by the `δ̄_i`, checked against the Apéry
/// basis when that is cheap and the precision allows.
pub fn value_semigroup(b: &PlaneBranch) -> Result<NumericalSemigroup> {
    let prep = prepare(b, |e| e.delta.last().unwrap() + 1)?;
    let s = semigroup_of(&prep.exps);
    let need = apery_precision(&prep.exps);
    if prep.exps.multiplicity() * need <= CROSS_CHECK_BUDGET {
        let deep = match prepare(b, apery_precision) {
            Ok(p) => Some(p),
            Err(BranchError::InsufficientPrecision { .. }) => None,
            Err(e) => return Err(e),
        };
        if let Some(deep) = deep {
            let basis = apery_basis_of(&deep.normalized)?;
            let values: Vec<u64> = basis.iter().map(|e| e.value).collect();
            let expected = s
                .apery_set(prep.exps.multiplicity())
                .expect("multiplicity is a member");
            if values != expected.values {
                return Err(BranchError::InternalMismatch(format!(
                    "Apéry basis values {values:?} differ from {expected}"
                )));
            }
        }
    }
    Ok(s)
}

/// `⟨δ̄_0, ..., δ̄_k⟩`.
pub fn semigroup_of(exps: &CharExponents) -> NumericalSemigroup {
    NumericalSemigroup::from_generators(&exps.deltabar()).expect("δ̄ generate a semigroup")
}

/// A ring element `f_i` with `v(f_i) = δ̄_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessGenerator {
    pub poly: BivariatePoly,
    pub value: u64,
}

/// Elements `f_0, ..., f_k` of the standardized branch whose orders are the
/// generators `δ̄_i`. Polynomials are in the standardized `x`, `y`.
pub fn witness_generators(b: &PlaneBranch) -> Result<Vec<WitnessGenerator>> {
    let prep = prepare(b, apery_precision)?;
    witnesses_of(&prep.standard, &prep.exps)
}

struct Element {
    poly: BivariatePoly,
    series: TruncatedSeries,
}

impl Element {
    fn monic(self) -> Result<Self> {
        let inv = self.series.leading()?.1.recip();
        Ok(Self {
            poly: poly_scale(&self.poly, &inv),
            series: self.series.scale(&inv),
        })
    }
}

/// `Π f_j^{n_j}`
fn product(fs: &[Element], n: &[u64], precision: u64) -> Element {
    let mut poly = monomial(0, 0);
    let mut series = TruncatedSeries::one(precision);
    for (f, &e) in fs.iter().zip(n) {
        if e == 0 {
            continue;
        }
        let mut pp = monomial(0, 0);
        for _ in 0..e {
            pp = poly_mul(&pp, &f.poly);
        }
        poly = poly_mul(&poly, &pp);
        series = series.mul(&f.series.pow(e));
    }
    Element { poly, series }
}

fn witnesses_of(s: &PlaneBranch, exps: &CharExponents) -> Result<Vec<WitnessGenerator>> {
    let bars = exps.deltabar();
    let d = &exps.d;
    let m = exps.multiplicity();
    let p = s.precision();
    let mut fs = vec![Element {
        poly: monomial(1, 0),
        series: s.x.clone(),
    }];
    if exps.k() >= 1 {
        let mut f = Element {
            poly: monomial(0, 1),
            series: s.y.clone(),
        };
        loop {
            let (o, lc) = f.series.leading()?;
            if o % m != 0 {
                break;
            }
            let sub = s.x.pow(o / m);
            let c = lc.clone();
            f.series = f.series.sub(&sub.scale(&c));
            poly_sub_shifted(&mut f.poly, &c, o / m, &monomial(0, 0));
        }
        fs.push(f.monic()?);
        check_order(&fs[1], bars[1])?;
    }
    for i in 1..exps.k() {
        let pi = d[i - 1] / d[i];
        let mut f = product(&fs[i..=i], &[pi], p);
        loop {
            let (o, lc) = f.series.leading()?;
            if o % d[i] != 0 {
                break;
            }
            let n = presentation::bounded_representation(&bars[..=i], o).ok_or_else(|| {
                BranchError::InternalMismatch(format!(
                    "order {o} is not in the semigroup of the first {} generators",
                    i + 1
                ))
            })?;
            let mono = product(&fs, &n, p);
            let c = lc / mono.series.leading()?.1;
            f.series = f.series.sub(&mono.series.scale(&c));
            poly_sub_shifted(&mut f.poly, &c, 0, &mono.poly);
        }
        fs.push(f.monic()?);
        check_order(&fs[i + 1], bars[i + 1])?;
    }
    Ok(fs
        .into_iter()
        .zip(bars)
        .map(|(f, value)| WitnessGenerator {
            poly: f.poly,
            value,
        })
        .collect())
}

fn check_order(f: &Element, expected: u64) -> Result<()> {
    let o = f.series.order()?;
    if o != expected {
        return Err(BranchError::InternalMismatch(format!(
            "witness has order {o}, expected {expected}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityInvariants {
    /// Conductors `c_i` of the successive blowups, ending with 0.
    pub conductor_degrees: Vec<u64>,
    /// `f_i = c_i / 2`.
    pub singularity_degrees: Vec<u64>,
    /// `Σ e_i (e_i - 1)`.
    pub hironaka_sum: u64,
}

/// Conductor degrees along the blowup chain, read from the descents of the
/// value semigroup, with the Hironaka sum as a check.
pub fn singularity_invariants(b: &PlaneBranch) -> Result<SingularityInvariants> {
    let prep = prepare(b, |e| e.delta.last().unwrap() + 1)?;
    let s = semigroup_of(&prep.exps);
    let seq = multseq::from_char_exponents(&prep.exps);
    Ok(invariants_of(&s, &seq)?)
}

fn invariants_of(
    s: &NumericalSemigroup,
    seq: &MultiplicitySequence,
) -> Result<SingularityInvariants> {
    let (steps, end) = semigroup::descent_trace(s);
    if let Err(f) = end {
        return Err(BranchError::InternalMismatch(format!(
            "value semigroup {s} does not descend: {f}"
        )));
    }
    let chain: Vec<u64> = steps.iter().map(|st| st.apery.base).collect();
    if chain != seq.expanded() {
        return Err(BranchError::InternalMismatch(format!(
            "descent multiplicities {chain:?} differ from {seq}"
        )));
    }
    let mut conductor_degrees: Vec<u64> = steps.iter().map(|st| st.semigroup.conductor()).collect();
    conductor_degrees.push(0);
    let hironaka_sum = seq.hironaka_sum();
    if conductor_degrees[0] != hironaka_sum {
        return Err(BranchError::InternalMismatch(format!(
            "conductor {} differs from Σe(e-1) = {hironaka_sum}",
            conductor_degrees[0]
        )));
    }
    let mut singularity_degrees = Vec::with_capacity(conductor_degrees.len());
    for &c in &conductor_degrees {
        if c % 2 != 0 {
            return Err(BranchError::InternalMismatch(format!("odd conductor {c}")));
        }
        singularity_degrees.push(c / 2);
    }
    Ok(SingularityInvariants {
        conductor_degrees,
        singularity_degrees,
        hironaka_sum,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceEvidence {
    pub equivalent: bool,
    pub semigroups: (NumericalSemigroup, NumericalSemigroup),
    pub multiplicity_sequences: (MultiplicitySequence, MultiplicitySequence),
    pub conductor_degrees: (Vec<u64>, Vec<u64>),
}

/// Equal value semigroups, with multiplicity sequences and conductor-degree
/// sequences as certificates that must agree.
pub fn formally_equivalent(b1: &PlaneBranch, b2: &PlaneBranch) -> Result<EquivalenceEvidence> {
    let s1 = value_semigroup(b1)?;
    let s2 = value_semigroup(b2)?;
    let e1 = multiplicity_sequence(b1)?;
    let e2 = multiplicity_sequence(b2)?;
    let c1 = invariants_of(&s1, &e1)?.conductor_degrees;
    let c2 = invariants_of(&s2, &e2)?.conductor_degrees;
    let verdicts = [s1 == s2, e1 == e2, c1 == c2];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(BranchError::InternalMismatch(format!(
            "equivalence certificates disagree: semigroups {}, multiplicities {}, conductor degrees {}",
            verdicts[0], verdicts[1], verdicts[2]
        )));
    }
    Ok(EquivalenceEvidence {
        equivalent: verdicts[0],
        semigroups: (s1, s2),
        multiplicity_sequences: (e1, e2),
        conductor_degrees: (c1, c2),
    })
}
