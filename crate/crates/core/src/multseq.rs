//! Multiplicity sequences: Euclidean blocks, admissibility, and the link
//! with characteristic exponents.

use std::fmt;

use thiserror::Error;

use crate::branch::CharExponents;
use crate::semigroup::{self, NumericalSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultSeqError {
    #[error("multiplicities must be positive")]
    ZeroEntry,
    #[error("multiplicities must be non-increasing ({prev} then {next})")]
    Increasing { prev: u64, next: u64 },
}

/// Non-increasing sequence `e_0 >= e_1 >= ...` stored as runs of entries
/// above 1; the tail of 1s is implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiplicitySequence {
    runs: Vec<(u64, u64)>,
}

impl MultiplicitySequence {
    pub fn from_entries<I: IntoIterator<Item = u64>>(entries: I) -> Result<Self, MultSeqError> {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        let mut prev: Option<u64> = None;
        for e in entries {
            if e == 0 {
                return Err(MultSeqError::ZeroEntry);
            }
            if let Some(p) = prev {
                if e > p {
                    return Err(MultSeqError::Increasing { prev: p, next: e });
                }
            }
            prev = Some(e);
            if e == 1 {
                continue;
            }
            match runs.last_mut() {
                Some((v, c)) if *v == e => *c += 1,
                _ => runs.push((e, 1)),
            }
        }
        Ok(Self { runs })
    }

    pub fn from_runs(runs: &[(u64, u64)]) -> Result<Self, MultSeqError> {
        Self::from_entries(
            runs.iter()
                .flat_map(|&(e, c)| std::iter::repeat(e).take(c as usize)),
        )
    }

    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    /// Entries above 1, expanded.
    pub fn expanded(&self) -> Vec<u64> {
        self.runs
            .iter()
            .flat_map(|&(e, c)| std::iter::repeat(e).take(c as usize))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of entries above 1.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, c)| c as usize).sum()
    }

    /// `Σ e_i (e_i - 1)`, which equals the conductor of the value semigroup.
    pub fn hironaka_sum(&self) -> u64 {
        self.runs.iter().map(|&(e, c)| c * e * (e - 1)).sum()
    }
}

/// `30,12^2,6^13,4,2^9`; the all-ones sequence prints as `1`.
impl fmt::Display for MultiplicitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(e, c)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}^{c}")?;
            }
        }
        Ok(())
    }
}

/// `M(m, n)`: each divisor of the Euclidean algorithm on `(m, n)` repeated
/// by its quotient, ending with `gcd(m, n)`.
pub fn euclid_m(m: u64, n: u64) -> Vec<u64> {
    assert!(m >= 1 && n >= 1, "M(m,n) needs positive arguments");
    let mut out = Vec::new();
    let (mut a, mut b) = (m, n);
    loop {
        let (q, r) = (a / b, a % b);
        out.extend(std::iter::repeat(b).take(q as usize));
        if r == 0 {
            return out;
        }
        a = b;
        b = r;
    }
}

/// Partial sums `0, e_0, e_0 + e_1, ...` (continuing by 1s) form a semigroup.
pub fn is_branch_admissible(e: &MultiplicitySequence) -> bool {
    let mut sums = vec![0u64];
    for x in e.expanded() {
        sums.push(sums.last().unwrap() + x);
    }
    // from the last partial sum on every integer is present
    let tail = *sums.last().unwrap();
    let mut member = vec![false; (2 * tail + 1) as usize];
    for &s in &sums {
        member[s as usize] = true;
    }
    for v in tail..=2 * tail {
        member[v as usize] = true;
    }
    let contains = |v: u64| v >= tail || member[v as usize];
    sums.iter()
        .all(|&a| sums.iter().all(|&b| contains(a + b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneAdmissibility {
    pub admissible: bool,
    pub reason: Option<String>,
    /// Semigroup obtained by lifting, when lifting succeeded.
    pub semigroup: Option<NumericalSemigroup>,
    /// `(m, n)` arguments of the Euclidean blocks of the realization.
    pub blocks: Vec<(u64, u64)>,
}

impl PlaneAdmissibility {
    fn reject(reason: String, semigroup: Option<NumericalSemigroup>) -> Self {
        Self {
            admissible: false,
            reason: Some(reason),
            semigroup,
            blocks: Vec::new(),
        }
    }
}

/// Round trip: lift to a semigroup, require it to be plane, and require the
/// realization to have multiplicity sequence `e` again.
pub fn is_plane_admissible(e: &MultiplicitySequence) -> PlaneAdmissibility {
    let s = match semigroup::from_multseq(e) {
        Ok(s) => s,
        Err(err) => return PlaneAdmissibility::reject(format!("lifting fails: {err}"), None),
    };
    if let Some(v) = semigroup::is_plane(&s).violation {
        return PlaneAdmissibility::reject(format!("{s} is not plane: {v}"), Some(s));
    }
    let delta = semigroup::realization_exponents(&s).expect("plane semigroup");
    let exps = CharExponents::new(delta).expect("realization exponents are valid");
    let back = from_char_exponents(&exps);
    if &back != e {
        return PlaneAdmissibility::reject(
            format!("realization of {s} has multiplicity sequence {back}"),
            Some(s),
        );
    }
    PlaneAdmissibility {
        admissible: true,
        reason: None,
        semigroup: Some(s),
        blocks: blocks(&exps),
    }
}

/// Arguments of `M(δ_0, δ_1), M(d_1, δ_2 - δ_1), ...`.
pub fn blocks(exps: &CharExponents) -> Vec<(u64, u64)> {
    let (delta, d) = (&exps.delta, &exps.d);
    (1..delta.len())
        .map(|i| {
            if i == 1 {
                (delta[0], delta[1])
            } else {
                (d[i - 1], delta[i] - delta[i - 1])
            }
        })
        .collect()
}

pub fn from_char_exponents(exps: &CharExponents) -> MultiplicitySequence {
    let entries: Vec<u64> = blocks(exps)
        .into_iter()
        .flat_map(|(m, n)| euclid_m(m, n))
        .collect();
    MultiplicitySequence::from_entries(entries).expect("Euclidean blocks are non-increasing")
}
