//! Brute-force verifiers that share no code path with the closed formulas:
//! values of a branch by exact row reduction, and semigroup closure by
//! dynamic programming.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::branch::PlaneBranch;
use crate::semigroup::AperySet;
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("insufficient precision: need t^{needed}, known below t^{precision}")]
    InsufficientPrecision { needed: u64, precision: u64 },
    #[error("x or y is zero up to its precision")]
    ZeroSeries,
    #[error("generators have gcd {0}")]
    GcdNotOne(u64),
    #[error("{0} is not in the semigroup")]
    NotMember(u64),
}

/// Which of `0..=bound` are attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    pub bound: u64,
    pub attained: Vec<bool>,
}

impl ValueTable {
    pub fn values(&self) -> Vec<u64> {
        (0..=self.bound).filter(|&v| self.attained[v as usize]).collect()
    }

    pub fn missing(&self) -> Vec<u64> {
        (0..=self.bound).filter(|&v| !self.attained[v as usize]).collect()
    }
}

/// Order in which monomials are fed to the row reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// By increasing value `a v(x) + b v(y)`.
    Increasing,
    /// By decreasing value.
    Decreasing,
}

/// `v(𝒪) ∩ [0, bound]` from the span of the monomials `x^a y^b` of value at
/// most `bound`. Powers of the variable of larger order stop below the
/// smaller order, since `𝒪` is generated by them as a module over the power
/// series in the other variable.
pub fn valuation_oracle(b: &PlaneBranch, bound: u64) -> Result<ValueTable, OracleError> {
    valuation_oracle_ordered(b, bound, MonomialOrder::Increasing)
}

pub fn valuation_oracle_ordered(
    b: &PlaneBranch,
    bound: u64,
    order: MonomialOrder,
) -> Result<ValueTable, OracleError> {
    let b = b.with_precision(bound + 1);
    if b.precision() < bound + 1 {
        return Err(OracleError::InsufficientPrecision {
            needed: bound + 1,
            precision: b.precision(),
        });
    }
    let (x, y) = (b.x().truncate(bound + 1), b.y().truncate(bound + 1));
    let vx = x.order().ok();
    let vy = y.order().ok();
    let (u, w, vu, vw) = match (vx, vy) {
        (Some(a), Some(c)) if a <= c => (x, Some(y), a, c),
        (Some(a), Some(c)) => (y, Some(x), c, a),
        (Some(a), None) => (x, None, a, 0),
        (None, Some(c)) => (y, None, c, 0),
        (None, None) => return Err(OracleError::ZeroSeries),
    };
    // (exponent of u, exponent of w)
    let mut monomials: Vec<(u64, u64)> = Vec::new();
    let w_max = if w.is_some() { vu - 1 } else { 0 };
    for j in 0..=w_max {
        if j * vw > bound {
            break;
        }
        for i in 0..=(bound - j * vw) / vu {
            monomials.push((i, j));
        }
    }
    monomials.sort_by_key(|&(i, j)| (i * vu + j * vw, j));
    if order == MonomialOrder::Decreasing {
        monomials.reverse();
    }

    let mut u_pows = vec![TruncatedSeries::one(bound + 1)];
    let mut w_pows = vec![TruncatedSeries::one(bound + 1)];
    let mut pivots: BTreeMap<u64, TruncatedSeries> = BTreeMap::new();
    for (i, j) in monomials {
        while u_pows.len() <= i as usize {
            let n = u_pows.last().unwrap().mul(&u).truncate(bound + 1);
            u_pows.push(n);
        }
        if let Some(w) = &w {
            while w_pows.len() <= j as usize {
                let n = w_pows.last().unwrap().mul(w).truncate(bound + 1);
                w_pows.push(n);
            }
        }
        let mut row = u_pows[i as usize]
            .mul(&w_pows[j as usize])
            .truncate(bound + 1);
        loop {
            let (e, c) = match row.leading() {
                Ok((e, c)) => (e, c.clone()),
                Err(SeriesError::ZeroUpToPrecision { .. }) => break,
                Err(_) => unreachable!("leading only fails on zero"),
            };
            match pivots.get(&e) {
                Some(p) => {
                    let pc = p.coeff(e).expect("pivot has its leading term");
                    row = row.sub(&p.scale(&(c / pc)));
                }
                None => {
                    pivots.insert(e, row);
                    break;
                }
            }
        }
    }
    let mut attained = vec![false; bound as usize + 1];
    for &e in pivots.keys() {
        attained[e as usize] = true;
    }
    Ok(ValueTable { bound, attained })
}

/// Additive closure of `gens` on `0..=bound`.
pub fn brute_semigroup(gens: &[u64], bound: u64) -> Result<ValueTable, OracleError> {
    let g = gens.iter().fold(0u64, |a, &b| a.gcd(&b));
    if g != 1 {
        return Err(OracleError::GcdNotOne(g));
    }
    let mut attained = vec![false; bound as usize + 1];
    attained[0] = true;
    for v in 1..=bound as usize {
        attained[v] = gens
            .iter()
            .any(|&a| a as usize <= v && attained[v - a as usize]);
    }
    Ok(ValueTable { bound, attained })
}

/// Least member of each residue class mod `a`, by scanning the closure.
pub fn brute_apery(gens: &[u64], a: u64) -> Result<AperySet, OracleError> {
    let mut bound = 4 * a.max(*gens.iter().max().unwrap_or(&1));
    loop {
        let table = brute_semigroup(gens, bound)?;
        if a as usize > table.attained.len() - 1 || !table.attained[a as usize] {
            return Err(OracleError::NotMember(a));
        }
        let mut first = vec![None; a as usize];
        for v in 0..=bound {
            if table.attained[v as usize] && first[(v % a) as usize].is_none() {
                first[(v % a) as usize] = Some(v);
            }
        }
        if first.iter().all(Option::is_some) {
            let mut values: Vec<u64> = first.into_iter().flatten().collect();
            values.sort_unstable();
            return Ok(AperySet { base: a, values });
        }
        bound *= 2;
    }
}
