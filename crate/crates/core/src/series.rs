//! Exact truncated power series in one variable `t` over the rationals.
//!
//! A [`TruncatedSeries`] stores the nonzero coefficients below its precision
//! `P`; everything at `t^P` and beyond is unknown. Every operation propagates
//! precision conservatively, so a coefficient that is stored is always exact.

use std::cmp::min;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// A polynomial in two variables `x`, `y`, keyed by the exponent pair `(a, b)`
/// of the monomial `x^a y^b`.
pub type BivariatePoly = BTreeMap<(u64, u64), Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series is zero up to precision {precision}")]
    ZeroUpToPrecision { precision: u64 },
    #[error("order {order} is not divisible by {root}")]
    NotAPerfectPower { order: u64, root: u64 },
    #[error("leading coefficient {0} is not 1")]
    NonMonic(Rational),
    #[error("every known exponent is divisible by {divisor}")]
    EpsilonBeyondPrecision { divisor: u64 },
    #[error("series has no nonzero constant term")]
    NotAUnit,
    #[error("divisors must be strictly decreasing")]
    DivisorsNotDecreasing,
    #[error("substitution t -> t(1+u) needs order(u) >= 1")]
    BadSubstitution,
    #[error("order {dividend} of dividend is below order {divisor} of divisor")]
    NotDivisible { dividend: u64, divisor: u64 },
    #[error("insufficient precision: need t^{needed}, known below t^{precision}")]
    InsufficientPrecision { needed: u64, precision: u64 },
}

pub type Result<T> = std::result::Result<T, SeriesError>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Terms as integers over their least common denominator.
fn scaled<'a, I>(terms: I) -> (BigInt, Vec<(u64, BigInt)>)
where
    I: Iterator<Item = (&'a u64, &'a Rational)> + Clone,
{
    let den = terms
        .clone()
        .fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let nums = terms
        .map(|(&e, c)| (e, c.numer() * (&den / c.denom())))
        .collect();
    (den, nums)
}

/// `Σ c_e t^e + O(t^precision)` with only nonzero `c_e` stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    terms: BTreeMap<u64, Rational>,
    precision: u64,
}

impl TruncatedSeries {
    pub fn zero(precision: u64) -> Self {
        assert!(precision >= 1, "series precision must be at least 1");
        Self {
            terms: BTreeMap::new(),
            precision,
        }
    }

    pub fn one(precision: u64) -> Self {
        Self::monomial(Rational::one(), 0, precision)
    }

    pub fn monomial(coeff: Rational, exponent: u64, precision: u64) -> Self {
        let mut s = Self::zero(precision);
        s.set(exponent, coeff);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated
    /// exponents accumulate; zero sums and exponents at or past `precision`
    /// are dropped.
    pub fn from_terms<I>(terms: I, precision: u64) -> Self
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        let mut acc: BTreeMap<u64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e < precision {
                *acc.entry(e).or_insert_with(Rational::zero) += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        assert!(precision >= 1, "series precision must be at least 1");
        Self {
            terms: acc,
            precision,
        }
    }

    /// Polynomial with integer coefficients, handy in tests.
    pub fn from_ints(terms: &[(u64, i64)], precision: u64) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))), precision)
    }

    fn set(&mut self, exponent: u64, coeff: Rational) {
        if exponent >= self.precision {
            return;
        }
        if coeff.is_zero() {
            self.terms.remove(&exponent);
        } else {
            self.terms.insert(exponent, coeff);
        }
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u64, &Rational)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `t^e`; `None` when `e` is at or past the precision.
    pub fn coeff(&self, e: u64) -> Option<Rational> {
        if e >= self.precision {
            None
        } else {
            Some(self.terms.get(&e).cloned().unwrap_or_else(Rational::zero))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Result<u64> {
        self.terms
            .keys()
            .next()
            .copied()
            .ok_or(SeriesError::ZeroUpToPrecision {
                precision: self.precision,
            })
    }

    pub fn leading(&self) -> Result<(u64, &Rational)> {
        self.terms
            .iter()
            .next()
            .map(|(&e, c)| (e, c))
            .ok_or(SeriesError::ZeroUpToPrecision {
                precision: self.precision,
            })
    }

    pub fn max_exponent(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// True when the series is `c t^e` with every other known coefficient zero.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Forgets everything at or beyond `precision` (no-op if already lower).
    pub fn truncate(&self, precision: u64) -> Self {
        let p = min(precision, self.precision);
        Self::from_terms(self.terms.range(..p).map(|(&e, c)| (e, c.clone())), p)
    }

    /// Reinterprets the stored terms as an exact polynomial known below
    /// `precision`. Only sound when the caller knows there are no further
    /// terms, e.g. for a parametrization typed in as a polynomial.
    pub fn assume_exact_to(&self, precision: u64) -> Self {
        Self {
            terms: self.terms.clone(),
            precision: precision.max(self.precision),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
            precision: self.precision,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
            precision: self.precision,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: u64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
            precision: self.precision + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = min(self.precision, other.precision);
        Self::from_terms(
            self.terms
                .range(..p)
                .chain(other.terms.range(..p))
                .map(|(&e, c)| (e, c.clone())),
            p,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = min(self.precision, other.precision);
        Self::from_terms(
            self.terms
                .range(..p)
                .map(|(&e, c)| (e, c.clone()))
                .chain(other.terms.range(..p).map(|(&e, c)| (e, -c))),
            p,
        )
    }

    /// Product with precision `min(Pa + ord b, Pb + ord a)`, or `min(Pa, Pb)`
    /// when either factor is zero up to its precision.
    pub fn mul(&self, other: &Self) -> Self {
        let (oa, ob) = match (self.order(), other.order()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Self::zero(min(self.precision, other.precision)),
        };
        let p = min(self.precision + ob, other.precision + oa);
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let (mono, rest) = if self.terms.len() == 1 {
                (self, other)
            } else {
                (other, self)
            };
            let (e, c) = mono.leading().expect("nonzero");
            return Self::from_terms(
                rest.terms
                    .iter()
                    .map(|(&f, d)| (e + f, c * d))
                    .take_while(|(f, _)| *f < p),
                p,
            );
        }
        let lo = oa + ob;
        if lo >= p {
            return Self::zero(p);
        }
        // convolve integer numerators over a common denominator, then
        // reduce each coefficient once
        let (da, a) = scaled(self.terms.range(..p - ob));
        let (db, b) = scaled(other.terms.range(..p - oa));
        let mut acc = vec![BigInt::zero(); (p - lo) as usize];
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e = ea + eb;
                if e >= p {
                    break;
                }
                acc[(e - lo) as usize] += ca * cb;
            }
        }
        let den = da * db;
        Self::from_terms(
            acc.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as u64, Rational::new(c, den.clone()))),
            p,
        )
    }

    /// `self^n` by square-and-multiply; the precision equals that of
    /// `n - 1` repeated multiplications.
    pub fn pow(&self, n: u64) -> Self {
        if n == 0 {
            return Self::one(self.precision);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.expect("n >= 1")
    }

    /// Exact quotient `self / divisor` as a power series.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let (m, d0) = divisor.leading()?;
        let d0 = d0.clone();
        let rel_d = divisor.precision - m;
        let n = match self.order() {
            Ok(n) => n,
            Err(_) => {
                // zero dividend: quotient is O(t^(P - m))
                if self.precision <= m {
                    return Err(SeriesError::InsufficientPrecision {
                        needed: m + 1,
                        precision: self.precision,
                    });
                }
                return Ok(Self::zero(self.precision - m));
            }
        };
        if n < m {
            return Err(SeriesError::NotDivisible {
                dividend: n,
                divisor: m,
            });
        }
        let rel = min(self.precision - n, rel_d) as usize;
        let dterms: Vec<(usize, &Rational)> = divisor
            .terms
            .iter()
            .skip(1)
            .map(|(&e, c)| ((e - m) as usize, c))
            .take_while(|(e, _)| *e < rel)
            .collect();
        let inv_d0 = d0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(rel);
        for k in 0..rel {
            let mut acc = self
                .terms
                .get(&(n + k as u64))
                .cloned()
                .unwrap_or_else(Rational::zero);
            for &(j, c) in &dterms {
                if j > k {
                    break;
                }
                if !q[k - j].is_zero() {
                    acc -= c * &q[k - j];
                }
            }
            q.push(acc * &inv_d0);
        }
        let shift = n - m;
        Ok(Self::from_terms(
            q.into_iter()
                .enumerate()
                .map(|(i, c)| (shift + i as u64, c)),
            shift + rel as u64,
        ))
    }

    /// `(1 + w)^alpha` known below `t^rel_precision`, where `self = w` has
    /// order at least 1. Uses the recurrence coming from
    /// `(1 + w) f' = alpha w' f`.
    pub fn binomial_power(&self, alpha: &Rational, rel_precision: u64) -> Result<Self> {
        if let Ok(o) = self.order() {
            if o == 0 {
                return Err(SeriesError::BadSubstitution);
            }
        }
        let n_max = min(rel_precision, self.precision) as usize;
        let w: Vec<(usize, &Rational)> = self
            .terms
            .iter()
            .map(|(&e, c)| (e as usize, c))
            .take_while(|(e, _)| *e < n_max)
            .collect();
        let mut f: Vec<Rational> = Vec::with_capacity(n_max);
        if n_max > 0 {
            f.push(Rational::one());
        }
        for n in 1..n_max {
            let mut acc = Rational::zero();
            for &(k, wk) in &w {
                if k > n {
                    break;
                }
                let fk = &f[n - k];
                if fk.is_zero() {
                    continue;
                }
                let factor = alpha * rat(k as i64) - rat((n - k) as i64);
                if !factor.is_zero() {
                    acc += wk * fk * factor;
                }
            }
            f.push(acc / rat(n as i64));
        }
        Ok(Self::from_terms(
            f.into_iter().enumerate().map(|(i, c)| (i as u64, c)),
            n_max.max(1) as u64,
        ))
    }

    /// Substitutes `t -> t (1 + u(t))`, `order(u) >= 1`.
    ///
    /// Result precision is `min(P_s, P_u + order(s))`.
    pub fn reparametrize(&self, u: &Self) -> Result<Self> {
        if let Ok(o) = u.order() {
            if o == 0 {
                return Err(SeriesError::BadSubstitution);
            }
        }
        let ord = match self.order() {
            Ok(o) => o,
            Err(_) => return Ok(self.clone()),
        };
        let p = min(self.precision, u.precision + ord);
        // s(t(1+u)) = Σ c_e t^e (1+u)^e, with the powers built up in order
        let g = Self::one(p - ord).add(&u.truncate(p - ord));
        let mut gaps: BTreeMap<u64, Self> = BTreeMap::new();
        let mut acc = Self::zero(p);
        let mut pw = Self::one(p - ord);
        let mut at = 0;
        for (&e, c) in self.terms.range(..p) {
            let rel = p - e;
            if e > at {
                let step = gaps
                    .entry(e - at)
                    .or_insert_with(|| g.pow(e - at))
                    .truncate(rel);
                pw = pw.truncate(rel).mul(&step);
                at = e;
            }
            acc = acc.add(&pw.truncate(rel).scale(c).shift(e));
        }
        Ok(acc)
    }

    /// `τ` with `τ^m = self`, for `self = t^(m q) (1 + w)` monic.
    pub fn formal_root(&self, m: u64) -> Result<Self> {
        assert!(m >= 1, "root index must be positive");
        let (ord, lc) = self.leading()?;
        if ord % m != 0 {
            return Err(SeriesError::NotAPerfectPower { order: ord, root: m });
        }
        if !lc.is_one() {
            return Err(SeriesError::NonMonic(lc.clone()));
        }
        let q = ord / m;
        let rel = self.precision - ord;
        let w = Self::from_terms(
            self.terms
                .iter()
                .skip(1)
                .map(|(&e, c)| (e - ord, c.clone())),
            rel,
        );
        let f = w.binomial_power(&ratio(1, m as i64), rel)?;
        Ok(f.shift(q))
    }

    /// Compositional inverse of `τ = t + O(t^2)`: the series `σ` with
    /// `τ(σ(s)) = s`, via Lagrange inversion
    /// `[s^n] σ = (1/n) [t^(n-1)] (t/τ)^n`.
    pub fn reversion(&self) -> Result<Self> {
        let (ord, lc) = self.leading()?;
        if ord != 1 {
            return Err(SeriesError::NotAPerfectPower { order: ord, root: 1 });
        }
        if !lc.is_one() {
            return Err(SeriesError::NonMonic(lc.clone()));
        }
        let p = self.precision;
        // τ = t (1 + v)
        let v = Self::from_terms(
            self.terms.iter().skip(1).map(|(&e, c)| (e - 1, c.clone())),
            p - 1,
        );
        let mut out: Vec<(u64, Rational)> = vec![(1, Rational::one())];
        // (1 + v)^(-n), one multiplication per step
        let inv = v.binomial_power(&rat(-1), p)?;
        let mut pw = inv.clone();
        for n in 2..p {
            pw = pw.mul(&inv);
            if let Some(c) = pw.coeff(n - 1) {
                if !c.is_zero() {
                    out.push((n, c / rat(n as i64)));
                }
            }
        }
        Ok(Self::from_terms(out, p))
    }

    /// Composition `self(σ)` for `σ = s + O(s^2)`.
    pub fn compose_with_tangent(&self, sigma: &Self) -> Result<Self> {
        let (o, lc) = sigma.leading()?;
        if o != 1 || !lc.is_one() {
            return Err(SeriesError::BadSubstitution);
        }
        let u = Self::from_terms(
            sigma
                .terms
                .iter()
                .skip(1)
                .map(|(&e, c)| (e - 1, c.clone())),
            sigma.precision - 1,
        );
        self.reparametrize(&u)
    }

    /// `(Σ_{i >= e} a_i t^i) / t^e`, rescaled so the constant term is 1.
    pub fn normalized_tail(&self, e: u64) -> Result<Self> {
        let tail = Self::from_terms(
            self.terms.range(e..).map(|(&f, c)| (f - e, c.clone())),
            self.precision - e,
        );
        let (o, lc) = tail.leading()?;
        if o != 0 {
            return Err(SeriesError::NotAUnit);
        }
        let inv = lc.recip();
        Ok(tail.scale(&inv))
    }
}

impl fmt::Display for TruncatedSeries {
    /// Renders in the text grammar: `t^12 + 2*t^14 - 3/2*t^15`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{}*", mag)?;
            }
            write!(f, "t^{}", e)?;
        }
        Ok(())
    }
}

/// `Σ c_ab x^a y^b` evaluated at the series `x`, `y`.
pub fn eval_poly(
    poly: &BivariatePoly,
    x: &TruncatedSeries,
    y: &TruncatedSeries,
) -> TruncatedSeries {
    let mut xp: BTreeMap<u64, TruncatedSeries> = BTreeMap::new();
    let mut yp: BTreeMap<u64, TruncatedSeries> = BTreeMap::new();
    let mut result: Option<TruncatedSeries> = None;
    for (&(a, b), c) in poly {
        if c.is_zero() {
            continue;
        }
        let xa = xp.entry(a).or_insert_with(|| x.pow(a)).clone();
        let yb = yp.entry(b).or_insert_with(|| y.pow(b)).clone();
        let term = xa.mul(&yb).scale(c);
        result = Some(match result {
            None => term,
            Some(r) => r.add(&term),
        });
    }
    result.unwrap_or_else(|| TruncatedSeries::zero(min(x.precision, y.precision)))
}

/// The vector `(ε_i, ..., ε_{k-1})` attached to a unit series `g` and a
/// chain of divisors `(d_i, ..., d_{k-1})`: `ε_s` is the least exponent with
/// nonzero coefficient not divisible by `d_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DVector {
    pub divisors: Vec<u64>,
    pub epsilons: Vec<u64>,
}

impl DVector {
    /// Coefficientwise `>=`.
    pub fn dominates(&self, other: &DVector) -> bool {
        self.epsilons
            .iter()
            .zip(&other.epsilons)
            .all(|(a, b)| a >= b)
    }

    pub fn pointwise_min(&self, other: &DVector) -> DVector {
        DVector {
            divisors: self.divisors.clone(),
            epsilons: self
                .epsilons
                .iter()
                .zip(&other.epsilons)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }
}

pub fn dvector(g: &TruncatedSeries, divisors: &[u64]) -> Result<DVector> {
    if g.order()? != 0 {
        return Err(SeriesError::NotAUnit);
    }
    if divisors.windows(2).any(|w| w[0] <= w[1]) || divisors.contains(&0) {
        return Err(SeriesError::DivisorsNotDecreasing);
    }
    let epsilons = divisors
        .iter()
        .map(|&d| {
            g.terms()
                .map(|(e, _)| e)
                .find(|e| e % d != 0)
                .ok_or(SeriesError::EpsilonBeyondPrecision { divisor: d })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DVector {
        divisors: divisors.to_vec(),
        epsilons,
    })
}
