//! Numerical semigroups: membership, Apéry sets, Frobenius number and
//! conductor, symmetry, descent and lifting along blowups, the plane-branch
//! criteria and realization of a plane semigroup by a branch.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::branch::{CharExponents, PlaneBranch};
use crate::multseq::{self, MultiplicitySequence};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("not a numerical semigroup: {0}")]
    NotNumericalSemigroup(String),
    #[error("{base} is not an element of the semigroup")]
    BaseNotInSemigroup { base: u64 },
    #[error("lifted values {values:?} do not form a semigroup")]
    LiftNotSemigroup { values: Vec<u64> },
    #[error("not the semigroup of a plane branch: {0}")]
    NotPlane(PlaneViolation),
}

pub type Result<T> = std::result::Result<T, SemigroupError>;

/// Running gcds `d_i = gcd(a_0, ..., a_i)`.
pub fn gcd_chain(gens: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(gens.len());
    let mut d = 0u64;
    for &g in gens {
        d = d.gcd(&g);
        out.push(d);
    }
    out
}

/// A subsemigroup of ℕ with finite complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    min_generators: Vec<u64>,
    conductor: u64,
    members: Vec<bool>,
}

impl NumericalSemigroup {
    pub fn naturals() -> Self {
        Self {
            min_generators: vec![1],
            conductor: 0,
            members: Vec::new(),
        }
    }

    /// Closure of `gens`. Membership comes from the Apéry set with respect
    /// to the smallest generator (shortest paths over residues), so no a
    /// priori bound on the conductor is needed.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(SemigroupError::NotNumericalSemigroup(
                "no generators".into(),
            ));
        }
        if gens.contains(&0) {
            return Err(SemigroupError::NotNumericalSemigroup(
                "generators must be positive".into(),
            ));
        }
        let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(SemigroupError::NotNumericalSemigroup(format!(
                "generators have gcd {g}"
            )));
        }
        let a = *gens.iter().min().expect("nonempty");
        let apery = apery_by_shortest_paths(gens, a);
        let conductor = apery.iter().max().copied().unwrap_or(0) + 1 - a;
        let members = (0..conductor)
            .map(|n| n >= apery[(n % a) as usize])
            .collect();
        let mut sorted = apery.clone();
        sorted.sort_unstable();
        let mut min_generators = vec![a];
        if a > 1 {
            for (i, &w) in sorted.iter().enumerate().skip(1) {
                let decomposable = sorted[1..i]
                    .iter()
                    .any(|&v| w - v >= apery[((w - v) % a) as usize]);
                if !decomposable {
                    min_generators.push(w);
                }
            }
        }
        min_generators.sort_unstable();
        Ok(Self {
            min_generators,
            conductor,
            members,
        })
    }

    pub fn min_generators(&self) -> &[u64] {
        &self.min_generators
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Largest integer outside the semigroup; `-1` for ℕ.
    pub fn frobenius(&self) -> i64 {
        self.conductor as i64 - 1
    }

    /// Smallest nonzero element.
    pub fn multiplicity(&self) -> u64 {
        self.min_generators[0]
    }

    pub fn embedding_dimension(&self) -> usize {
        self.min_generators.len()
    }

    pub fn is_naturals(&self) -> bool {
        self.conductor == 0
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.members[n as usize]
    }

    pub fn gaps(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&n| !self.contains(n)).collect()
    }

    pub fn genus(&self) -> u64 {
        self.members.iter().filter(|m| !**m).count() as u64
    }

    /// Elements below `bound`.
    pub fn elements_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }

    pub fn apery_set(&self, a: u64) -> Result<AperySet> {
        if a == 0 || !self.contains(a) {
            return Err(SemigroupError::BaseNotInSemigroup { base: a });
        }
        let mut values = vec![u64::MAX; a as usize];
        let mut found = 0;
        let mut n = 0u64;
        while found < a {
            if self.contains(n) && values[(n % a) as usize] == u64::MAX {
                values[(n % a) as usize] = n;
                found += 1;
            }
            n += 1;
        }
        values.sort_unstable();
        Ok(AperySet { base: a, values })
    }

    /// `(γ, c)`, checked against `γ = ω_{a-1} - a` for the Apéry set with
    /// respect to the multiplicity.
    pub fn frobenius_and_conductor(&self) -> (i64, u64) {
        let gamma = self.frobenius();
        let m = self.multiplicity();
        let ap = self.apery_set(m).expect("multiplicity is a member");
        assert_eq!(
            gamma,
            *ap.values.last().expect("nonempty") as i64 - m as i64,
            "Frobenius number disagrees with the Apéry set"
        );
        (gamma, self.conductor)
    }

    /// `z ∈ S ⇔ γ - z ∉ S` for `0 <= z <= γ`.
    pub fn is_symmetric(&self) -> bool {
        let gamma = self.frobenius();
        if gamma < 0 {
            return true;
        }
        let g = gamma as u64;
        (0..=g).all(|z| self.contains(z) != self.contains(g - z))
    }

    /// `c_d(S)`: least `n d` with every `m d`, `m >= n`, in `S`.
    pub fn d_conductor(&self, d: u64) -> u64 {
        assert!(d >= 1);
        (0..self.conductor)
            .rev()
            .find(|&n| n % d == 0 && !self.contains(n))
            .map_or(0, |n| n + d)
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.min_generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

/// Least element of `⟨gens⟩` in each residue class mod `a` (Dijkstra on
/// the residue graph).
fn apery_by_shortest_paths(gens: &[u64], a: u64) -> Vec<u64> {
    let mut dist = vec![u64::MAX; a as usize];
    dist[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, 0u64)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r as usize] {
            continue;
        }
        for &g in gens {
            let nd = d + g;
            let nr = (r + g) % a;
            if nd < dist[nr as usize] {
                dist[nr as usize] = nd;
                heap.push(Reverse((nd, nr)));
            }
        }
    }
    dist
}

/// Ordered Apéry set `ω_0 < ω_1 < ... < ω_{a-1}` with respect to `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AperySet {
    pub base: u64,
    pub values: Vec<u64>,
}

impl AperySet {
    /// The semigroup `∪ (ω_i + base ℕ)`. The values must already be closed
    /// under addition up to the class minima.
    pub fn semigroup(&self) -> NumericalSemigroup {
        let mut gens = vec![self.base];
        gens.extend(self.values.iter().copied().filter(|&v| v > 0));
        NumericalSemigroup::from_generators(&gens).expect("Apéry set spans all residues")
    }
}

impl fmt::Display for AperySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

/// True when `values` hit each residue mod `m` once, contain 0, and the
/// union of the classes `v + mℕ` is additively closed.
fn classes_closed(values: &[u64], m: u64) -> bool {
    let mut minima = vec![u64::MAX; m as usize];
    for &v in values {
        let r = (v % m) as usize;
        if minima[r] != u64::MAX {
            return false;
        }
        minima[r] = v;
    }
    if minima[0] != 0 || minima.contains(&u64::MAX) {
        return false;
    }
    values.iter().all(|&a| {
        values
            .iter()
            .all(|&b| a + b >= minima[((a + b) % m) as usize])
    })
}

/// Why a descent step `ω_i -> ω_i - i m` did not produce an ordered Apéry set.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DescentFailure {
    #[error("candidate {candidate:?} has a negative value")]
    NegativeValue { candidate: Vec<i64> },
    #[error("candidate {candidate:?} is not increasing")]
    NotIncreasing { candidate: Vec<i64> },
    #[error("candidate {candidate:?} is not the Apéry set of a semigroup")]
    NotASemigroup { candidate: Vec<i64> },
}

impl DescentFailure {
    pub fn kind(&self) -> &'static str {
        match self {
            DescentFailure::NegativeValue { .. } => "NegativeValue",
            DescentFailure::NotIncreasing { .. } => "NotIncreasing",
            DescentFailure::NotASemigroup { .. } => "NotASemigroup",
        }
    }

    pub fn candidate(&self) -> &[i64] {
        match self {
            DescentFailure::NegativeValue { candidate }
            | DescentFailure::NotIncreasing { candidate }
            | DescentFailure::NotASemigroup { candidate } => candidate,
        }
    }
}

/// Apéry set of the blowup: `ω_i - i m`.
pub fn descend(a: &AperySet) -> std::result::Result<AperySet, DescentFailure> {
    let m = a.base as i64;
    let candidate: Vec<i64> = a
        .values
        .iter()
        .enumerate()
        .map(|(i, &w)| w as i64 - i as i64 * m)
        .collect();
    if candidate.iter().any(|&c| c < 0) {
        return Err(DescentFailure::NegativeValue { candidate });
    }
    if candidate.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DescentFailure::NotIncreasing { candidate });
    }
    let values: Vec<u64> = candidate.iter().map(|&c| c as u64).collect();
    if !classes_closed(&values, a.base) {
        return Err(DescentFailure::NotASemigroup { candidate });
    }
    Ok(AperySet {
        base: a.base,
        values,
    })
}

/// Inverse of [`descend`]: `ω'_i + i m`.
pub fn lift(a: &AperySet) -> Result<AperySet> {
    let values: Vec<u64> = a
        .values
        .iter()
        .enumerate()
        .map(|(i, &w)| w + i as u64 * a.base)
        .collect();
    if !classes_closed(&values, a.base) {
        return Err(SemigroupError::LiftNotSemigroup { values });
    }
    Ok(AperySet {
        base: a.base,
        values,
    })
}

/// First failed condition of the plane-branch characterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneViolation {
    /// `d_{i-1} > d_i` fails (or the chain stops above 1).
    GcdChain { index: usize, chain: Vec<u64> },
    /// `a_i > lcm(d_{i-2}, a_{i-1})` fails.
    Lcm { index: usize, generator: u64, lcm: u64 },
}

impl fmt::Display for PlaneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneViolation::GcdChain { index, chain } => {
                let c: Vec<String> = chain.iter().map(|x| x.to_string()).collect();
                write!(
                    f,
                    "gcd chain {} is not strictly decreasing to 1 (at index {index})",
                    c.join(",")
                )
            }
            PlaneViolation::Lcm {
                index,
                generator,
                lcm,
            } => write!(
                f,
                "generator a_{index}={generator} does not exceed lcm(d_{},a_{})={lcm}",
                index - 2,
                index - 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneVerdict {
    pub plane: bool,
    pub violation: Option<PlaneViolation>,
}

/// The generator criterion: (a) `d_0 > d_1 > ... > d_k = 1` and
/// (b) `a_i > lcm(d_{i-2}, a_{i-1})` for `i >= 2`.
pub fn is_plane(s: &NumericalSemigroup) -> PlaneVerdict {
    let a = s.min_generators();
    let d = gcd_chain(a);
    for i in 1..d.len() {
        if d[i] >= d[i - 1] {
            return PlaneVerdict {
                plane: false,
                violation: Some(PlaneViolation::GcdChain {
                    index: i,
                    chain: d,
                }),
            };
        }
    }
    for i in 2..a.len() {
        let l = d[i - 2].lcm(&a[i - 1]);
        if a[i] <= l {
            return PlaneVerdict {
                plane: false,
                violation: Some(PlaneViolation::Lcm {
                    index: i,
                    generator: a[i],
                    lcm: l,
                }),
            };
        }
    }
    PlaneVerdict {
        plane: true,
        violation: None,
    }
}

/// One level of the iterative descent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub semigroup: NumericalSemigroup,
    pub apery: AperySet,
    pub outcome: std::result::Result<AperySet, DescentFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterativeVerdict {
    pub plane: bool,
    /// Multiplicities `m_0, m_1, ...` met along the descent.
    pub chain: Vec<u64>,
    pub steps: Vec<DescentStep>,
    pub reached_naturals: bool,
    pub reason: Option<String>,
}

/// Repeated descent at the multiplicity until ℕ, then plane admissibility of
/// the multiplicity chain. Must agree with [`is_plane`].
pub fn is_plane_iterative(s: &NumericalSemigroup) -> IterativeVerdict {
    let (steps, end) = descent_trace(s);
    let chain: Vec<u64> = steps.iter().map(|st| st.apery.base).collect();
    let mut verdict = IterativeVerdict {
        plane: false,
        chain,
        steps,
        reached_naturals: false,
        reason: None,
    };
    if !s.is_symmetric() {
        verdict.reason = Some(format!("{s} is not symmetric"));
    } else {
        match end {
            Err(failure) => {
                verdict.reason = Some(format!(
                    "descent fails with {}: {:?}",
                    failure.kind(),
                    failure.candidate()
                ));
            }
            Ok(()) => {
                verdict.reached_naturals = true;
                let seq = MultiplicitySequence::from_entries(verdict.chain.iter().copied())
                    .expect("descent multiplicities are non-increasing");
                let adm = multseq::is_plane_admissible(&seq);
                if adm.admissible {
                    verdict.plane = true;
                } else {
                    verdict.reason = Some(format!(
                        "multiplicity sequence {} not plane-admissible",
                        verdict
                            .chain
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ));
                }
            }
        }
    }
    let direct = is_plane(s);
    assert_eq!(
        direct.plane, verdict.plane,
        "generator criterion and iterative descent disagree on {s}"
    );
    verdict
}

/// Descent at the multiplicity, level by level, until ℕ or a failure.
pub fn descent_trace(
    s: &NumericalSemigroup,
) -> (Vec<DescentStep>, std::result::Result<(), DescentFailure>) {
    let mut steps = Vec::new();
    let mut current = s.clone();
    while !current.is_naturals() {
        let m = current.multiplicity();
        let apery = current.apery_set(m).expect("multiplicity is a member");
        let outcome = descend(&apery);
        let next = outcome.as_ref().ok().map(|a| a.semigroup());
        steps.push(DescentStep {
            semigroup: current.clone(),
            apery,
            outcome: outcome.clone(),
        });
        match next {
            Some(n) => current = n,
            None => return (steps, Err(outcome.unwrap_err())),
        }
    }
    (steps, Ok(()))
}

/// Exponents `a_1 + ... + a_j - (lcm(d_0,a_1) + ... + lcm(d_{j-2},a_{j-1}))`
/// of the canonical realization, i.e. its characteristic exponents.
pub fn realization_exponents(s: &NumericalSemigroup) -> Result<Vec<u64>> {
    let verdict = is_plane(s);
    if let Some(v) = verdict.violation {
        return Err(SemigroupError::NotPlane(v));
    }
    let a = s.min_generators();
    let d = gcd_chain(a);
    let mut exps = vec![a[0]];
    if a.len() == 1 {
        return Ok(exps);
    }
    let mut sum = a[1];
    let mut lcms = 0u64;
    exps.push(a[1]);
    for j in 2..a.len() {
        sum += a[j];
        lcms += d[j - 2].lcm(&a[j - 1]);
        exps.push(sum - lcms);
    }
    Ok(exps)
}

/// The branch `x = t^{a_0}`, `y = t^{a_1} + t^{...} + ...` whose value
/// semigroup is `s`, with precision `conductor + 2 a_0`.
pub fn realize(s: &NumericalSemigroup) -> Result<PlaneBranch> {
    let exps = realization_exponents(s)?;
    let precision = s.conductor() + 2 * exps[0];
    // only ℕ needs more than c + 2a_0, for the t^2 term
    let precision = precision.max(exps.last().copied().unwrap_or(1) + 1).max(3);
    let x = TruncatedSeries::from_ints(&[(exps[0], 1)], precision);
    let y = if exps.len() == 1 {
        // ℕ: the smooth branch (t, t^2)
        TruncatedSeries::from_ints(&[(2, 1)], precision)
    } else {
        let terms: Vec<(u64, i64)> = exps[1..].iter().map(|&e| (e, 1)).collect();
        TruncatedSeries::from_ints(&terms, precision)
    };
    Ok(PlaneBranch::polynomial(x, y).expect("realization is a valid branch"))
}

/// Semigroup determined by a multiplicity sequence: lift from ℕ with base
/// `e_j`, from the last entry above 1 back to the first.
pub fn from_multseq(e: &MultiplicitySequence) -> Result<NumericalSemigroup> {
    let mut s = NumericalSemigroup::naturals();
    for &m in e.expanded().iter().rev() {
        let ap = s.apery_set(m)?;
        let lifted = lift(&ap)?;
        s = lifted.semigroup();
    }
    Ok(s)
}

/// Closed forms for the conductor and the `d_i`-conductors of a plane
/// semigroup, all checked against brute force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorForms {
    /// `Σ (d_{i-1}/d_i - 1)(δ̄_i - d_i)`
    pub via_deltabar: u64,
    /// `Σ (d_{i-1} - d_i) δ_i + 1 - d_0`
    pub via_delta: u64,
    /// `(d_i, c_{d_i}(S))` for `i = 0..=k`.
    pub d_conductors: Vec<(u64, u64)>,
}

pub fn conductor_closed_forms(
    s: &NumericalSemigroup,
    exps: &CharExponents,
) -> Result<ConductorForms> {
    if let Some(v) = is_plane(s).violation {
        return Err(SemigroupError::NotPlane(v));
    }
    let bars = s.min_generators();
    let d = &exps.d;
    let delta = &exps.delta;
    assert_eq!(bars.len(), delta.len(), "exponents do not match semigroup");
    assert_eq!(&gcd_chain(bars), d, "gcd chains differ");

    // partial sums of Cor-style terms give c_{d_i}
    let mut d_conductors = vec![(d[0], 0u64)];
    let mut acc = 0u64;
    for i in 1..bars.len() {
        acc += (d[i - 1] / d[i] - 1) * (bars[i] - d[i]);
        // second route: (1/d_i) Σ_{j<=i} δ_j (d_{j-1} - d_j) + d_i - d_0
        let num: u64 = (1..=i).map(|j| delta[j] * (d[j - 1] - d[j])).sum();
        assert_eq!(num % d[i], 0);
        let alt = (num / d[i] + d[i]) as i64 - d[0] as i64;
        assert_eq!(alt, acc as i64, "d-conductor closed forms disagree");
        let brute = s.d_conductor(d[i]);
        assert_eq!(brute, acc, "d-conductor formula disagrees with brute scan");
        d_conductors.push((d[i], acc));
    }
    assert_eq!(s.d_conductor(d[0]), 0);
    let via_delta = (1..delta.len())
        .map(|i| ((d[i - 1] - d[i]) * delta[i]) as i64)
        .sum::<i64>()
        + 1
        - d[0] as i64;
    assert!(via_delta >= 0);
    let forms = ConductorForms {
        via_deltabar: acc,
        via_delta: via_delta as u64,
        d_conductors,
    };
    assert_eq!(forms.via_deltabar, s.conductor());
    assert_eq!(forms.via_delta, s.conductor());
    Ok(forms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    fn ap(base: u64, values: &[u64]) -> AperySet {
        AperySet {
            base,
            values: values.to_vec(),
        }
    }

    #[test]
    fn closure_examples() {
        let s = sg(&[4, 5, 6]);
        assert_eq!(s.conductor(), 8);
        assert_eq!(s.frobenius(), 7);
        assert_eq!(s.min_generators(), &[4, 5, 6]);
        assert_eq!(sg(&[8, 12, 26, 53]).conductor(), 84);
        let n = sg(&[1]);
        assert!(n.is_naturals());
        assert_eq!(n.frobenius(), -1);
        assert_eq!(n, NumericalSemigroup::naturals());
    }

    #[test]
    fn minimalizes_generators() {
        assert_eq!(sg(&[4, 6, 8, 10, 13, 12]).min_generators(), &[4, 6, 13]);
        assert_eq!(sg(&[3, 2, 5, 7]).min_generators(), &[2, 3]);
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            NumericalSemigroup::from_generators(&[2, 4]),
            Err(SemigroupError::NotNumericalSemigroup(_))
        ));
        assert!(NumericalSemigroup::from_generators(&[]).is_err());
        assert!(NumericalSemigroup::from_generators(&[0, 1]).is_err());
    }

    #[test]
    fn apery_examples() {
        assert_eq!(sg(&[4, 5, 6]).apery_set(4).unwrap().values, vec![0, 5, 6, 11]);
        assert_eq!(
            sg(&[6, 10, 29]).apery_set(6).unwrap().values,
            vec![0, 10, 20, 29, 39, 49]
        );
        assert_eq!(
            NumericalSemigroup::naturals().apery_set(5).unwrap().values,
            vec![0, 1, 2, 3, 4]
        );
        assert_eq!(
            sg(&[4, 5, 6]).apery_set(7),
            Err(SemigroupError::BaseNotInSemigroup { base: 7 })
        );
    }

    #[test]
    fn frobenius_from_apery() {
        assert_eq!(sg(&[4, 6, 13]).frobenius_and_conductor(), (15, 16));
        assert_eq!(sg(&[30, 42, 280, 855]).frobenius_and_conductor().1, 1554);
        assert_eq!(NumericalSemigroup::naturals().frobenius_and_conductor(), (-1, 0));
    }

    #[test]
    fn symmetry() {
        assert!(sg(&[4, 5, 6]).is_symmetric());
        assert!(sg(&[8, 12, 26, 53]).is_symmetric());
        assert!(!sg(&[3, 5, 7]).is_symmetric());
        assert_eq!(sg(&[8, 12, 26, 53]).genus(), 42);
    }

    #[test]
    fn d_conductors() {
        let s = sg(&[8, 12, 26, 53]);
        assert_eq!(s.d_conductor(4), 8);
        assert_eq!(s.d_conductor(2), 32);
        assert_eq!(s.d_conductor(1), s.conductor());
    }

    #[test]
    fn descend_examples() {
        let a = sg(&[4, 5, 6]).apery_set(4).unwrap();
        assert_eq!(
            descend(&a),
            Err(DescentFailure::NegativeValue {
                candidate: vec![0, 1, -2, -1]
            })
        );
        let a = sg(&[6, 10, 29]).apery_set(6).unwrap();
        let d = descend(&a).unwrap();
        assert_eq!(d.values, vec![0, 4, 8, 11, 15, 19]);
        assert_eq!(d.semigroup(), sg(&[4, 6, 11]));
        assert_eq!(
            descend(&ap(4, &[0, 9, 10, 19])),
            Err(DescentFailure::NotIncreasing {
                candidate: vec![0, 5, 2, 7]
            })
        );
    }

    #[test]
    fn descend_detects_non_semigroup() {
        // 0,1,5 wrt 3 is increasing and nonnegative but 1+1=2 < 5
        let a = ap(3, &[0, 4, 11]);
        assert!(matches!(
            descend(&a),
            Err(DescentFailure::NotASemigroup { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let base = sg(&[4, 10, 21]).apery_set(8).unwrap();
        let up = lift(&base).unwrap();
        assert_eq!(up.values, vec![0, 12, 26, 38, 53, 65, 79, 91]);
        assert_eq!(up.semigroup(), sg(&[8, 12, 26, 53]));
        assert_eq!(descend(&up).unwrap(), base);

        let n2 = NumericalSemigroup::naturals().apery_set(2).unwrap();
        assert_eq!(lift(&n2).unwrap().values, vec![0, 3]);
        let n1 = NumericalSemigroup::naturals().apery_set(1).unwrap();
        assert_eq!(lift(&n1).unwrap().values, vec![0]);
        assert!(lift(&n1).unwrap().semigroup().is_naturals());
    }

    #[test]
    fn lift_rejects() {
        // lifting {0,1,2} wrt 3 to {0,4,8}: fine; {0,2,1}? not ordered input
        let a = ap(3, &[0, 2, 7]);
        // lifted: 0, 5, 13 ; 5+5=10 ≡ 1 but min of class 1 is 13 > 10
        assert!(matches!(
            lift(&a),
            Err(SemigroupError::LiftNotSemigroup { .. })
        ));
    }

    #[test]
    fn plane_criterion() {
        assert!(is_plane(&sg(&[30, 42, 280, 855])).plane);
        let v = is_plane(&sg(&[6, 10, 29]));
        assert_eq!(
            v.violation,
            Some(PlaneViolation::Lcm {
                index: 2,
                generator: 29,
                lcm: 30
            })
        );
        let v = is_plane(&sg(&[4, 5, 6]));
        assert!(matches!(v.violation, Some(PlaneViolation::GcdChain { index: 2, .. })));
        assert!(is_plane(&NumericalSemigroup::naturals()).plane);
    }

    #[test]
    fn iterative_criterion() {
        let v = is_plane_iterative(&sg(&[6, 10, 29]));
        assert!(!v.plane);
        assert!(v.reached_naturals);
        assert_eq!(v.chain, vec![6, 4, 2]);
        assert_eq!(
            v.reason.as_deref(),
            Some("multiplicity sequence 6,4,2 not plane-admissible")
        );

        let v = is_plane_iterative(&sg(&[8, 12, 26, 53]));
        assert!(v.plane);
        assert_eq!(v.chain, vec![8, 4, 4, 2, 2]);

        let v = is_plane_iterative(&NumericalSemigroup::naturals());
        assert!(v.plane);
        assert!(v.chain.is_empty());

        let v = is_plane_iterative(&sg(&[4, 5, 6]));
        assert!(!v.plane);
        assert!(matches!(
            v.steps[0].outcome,
            Err(DescentFailure::NegativeValue { .. })
        ));
    }

    #[test]
    fn realization_exponents_examples() {
        assert_eq!(
            realization_exponents(&sg(&[30, 42, 280, 855])).unwrap(),
            vec![30, 42, 112, 127]
        );
        assert_eq!(
            realization_exponents(&sg(&[8, 12, 26, 53])).unwrap(),
            vec![8, 12, 14, 15]
        );
        assert_eq!(realization_exponents(&sg(&[2, 3])).unwrap(), vec![2, 3]);
        assert!(matches!(
            realize(&sg(&[6, 10, 29])),
            Err(SemigroupError::NotPlane(_))
        ));
    }

    #[test]
    fn semigroup_from_multseq() {
        let e = MultiplicitySequence::from_entries([4, 2, 2]).unwrap();
        let s = from_multseq(&e).unwrap();
        assert_eq!(s, sg(&[4, 6, 13]));
        assert_eq!(s.apery_set(4).unwrap().values, vec![0, 6, 13, 19]);
        let e = MultiplicitySequence::from_entries([2]).unwrap();
        assert_eq!(from_multseq(&e).unwrap(), sg(&[2, 3]));
        let e = MultiplicitySequence::from_entries([]).unwrap();
        assert!(from_multseq(&e).unwrap().is_naturals());
        // 3 is not in <2,3>+... : 5,3 → lift with 3 fine; 3,5 invalid input anyway
        let e = MultiplicitySequence::from_entries([2, 2, 2, 2]).unwrap();
        assert_eq!(from_multseq(&e).unwrap(), sg(&[2, 9]));
    }

    #[test]
    fn closed_forms() {
        let s = sg(&[8, 12, 26, 53]);
        let e = CharExponents::new(vec![8, 12, 14, 15]).unwrap();
        let f = conductor_closed_forms(&s, &e).unwrap();
        assert_eq!(f.via_deltabar, 84);
        assert_eq!(f.via_delta, 84);
        assert_eq!(f.d_conductors, vec![(8, 0), (4, 8), (2, 32), (1, 84)]);

        let s = sg(&[30, 42, 280, 855]);
        let e = CharExponents::new(vec![30, 42, 112, 127]).unwrap();
        assert_eq!(conductor_closed_forms(&s, &e).unwrap().via_delta, 1554);

        let s = sg(&[2, 3]);
        let e = CharExponents::new(vec![2, 3]).unwrap();
        assert_eq!(conductor_closed_forms(&s, &e).unwrap().via_deltabar, 2);
    }
}
