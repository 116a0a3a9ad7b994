//! Unique Apéry expressions, the complete-intersection relations of the
//! semigroup ring, their initial forms and the generating function.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::semigroup::{gcd_chain, is_plane, NumericalSemigroup, PlaneViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("{value} is not an element of the semigroup")]
    NotMember { value: u64 },
    #[error("not the semigroup of a plane branch: {0}")]
    NotPlane(PlaneViolation),
    #[error("no complete-intersection presentation found: {0}")]
    NoPresentation(String),
}

pub type Result<T> = std::result::Result<T, PresentationError>;

/// Coefficients `(n_0, ..., n_k)` of `Σ n_i δ̄_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn value(&self, gens: &[u64]) -> u64 {
        self.0.iter().zip(gens).map(|(n, g)| n * g).sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// `n` with `n mod m = a^{-1} b mod m`, for `gcd(a, m) = 1`.
fn solve_unit(a: u64, b: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(g.gcd, 1);
    let inv = g.x.rem_euclid(m as i64) as u64;
    ((inv as u128 * (b % m) as u128) % m as u128) as u64
}

/// The representation `value = Σ n_i g_i` with `0 <= n_i < d_{i-1}/d_i`
/// for `i >= 1`, found by residue extraction from the last generator down.
/// Needs a strictly decreasing gcd chain; `None` when `value` is not
/// represented in that form.
pub fn bounded_representation(gens: &[u64], value: u64) -> Option<Vec<u64>> {
    let d = gcd_chain(gens);
    if d.windows(2).any(|w| w[1] >= w[0]) || value % d.last()? != 0 {
        return None;
    }
    let mut n = vec![0u64; gens.len()];
    let mut r = value;
    for j in (1..gens.len()).rev() {
        let p = d[j - 1] / d[j];
        let nj = solve_unit(gens[j] / d[j], r / d[j], p);
        let take = nj.checked_mul(gens[j])?;
        r = r.checked_sub(take)?;
        n[j] = nj;
    }
    if r % gens[0] != 0 {
        return None;
    }
    n[0] = r / gens[0];
    Some(n)
}

/// Representation minimizing `(n_k, ..., n_1)` lexicographically.
fn lex_min_representation(gens: &[u64], value: u64) -> Option<Vec<u64>> {
    let len = value as usize + 1;
    // reach[j][v]: v is a combination of gens[0..=j]
    let mut reach: Vec<Vec<bool>> = Vec::with_capacity(gens.len());
    for (j, &g) in gens.iter().enumerate() {
        let mut row = match j {
            0 => {
                let mut r = vec![false; len];
                r[0] = true;
                r
            }
            _ => reach[j - 1].clone(),
        };
        for v in g as usize..len {
            if row[v - g as usize] {
                row[v] = true;
            }
        }
        reach.push(row);
    }
    if !reach[gens.len() - 1][value as usize] {
        return None;
    }
    let mut n = vec![0u64; gens.len()];
    let mut r = value;
    for j in (1..gens.len()).rev() {
        let mut nj = 0;
        while !reach[j - 1][(r - nj * gens[j]) as usize] {
            nj += 1;
        }
        n[j] = nj;
        r -= nj * gens[j];
    }
    n[0] = r / gens[0];
    Some(n)
}

/// Representation of `value` over the minimal generators: the bounded form
/// when it exists (always, for plane semigroups), else the lexicographically
/// least one in `(n_k, ..., n_1)`.
pub fn normal_form(s: &NumericalSemigroup, value: u64) -> Result<ExponentVector> {
    if !s.contains(value) {
        return Err(PresentationError::NotMember { value });
    }
    let gens = s.min_generators();
    let n = bounded_representation(gens, value)
        .or_else(|| lex_min_representation(gens, value))
        .expect("members are represented");
    Ok(ExponentVector(n))
}

fn require_plane(s: &NumericalSemigroup) -> Result<()> {
    match is_plane(s).violation {
        Some(v) => Err(PresentationError::NotPlane(v)),
        None => Ok(()),
    }
}

fn quotients(s: &NumericalSemigroup) -> Vec<u64> {
    let d = gcd_chain(s.min_generators());
    d.windows(2).map(|w| w[0] / w[1]).collect()
}

/// `(n_1, ..., n_k)` with `d_{j-1}/d_j` in position `j`, zeros elsewhere.
pub fn minimals(s: &NumericalSemigroup) -> Result<Vec<ExponentVector>> {
    require_plane(s)?;
    let q = quotients(s);
    Ok((0..q.len())
        .map(|j| {
            let mut v = vec![0; q.len()];
            v[j] = q[j];
            ExponentVector(v)
        })
        .collect())
}

/// `Y_j^{p_j} = Y_0^{n_0} ... Y_{j-1}^{n_{j-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub index: usize,
    pub power: u64,
    /// Exponents of `Y_0, ..., Y_{j-1}`.
    pub monomial: ExponentVector,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y{}^{} = ", self.index, self.power)?;
        let mut first = true;
        for (i, &n) in self.monomial.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if n == 1 {
                write!(f, "Y{i}")?;
            } else {
                write!(f, "Y{i}^{n}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<u64>,
    pub relations: Vec<Relation>,
    /// Set for non-plane semigroups, where the relations come from a search
    /// that is only checked, not guaranteed.
    pub best_effort: bool,
}

/// The `k` binomial relations presenting `ℂ[S]` as a complete intersection.
/// Non-plane semigroups with at most three generators and a strictly
/// decreasing gcd chain get a best-effort answer checked by the Hilbert
/// series.
pub fn relations(s: &NumericalSemigroup) -> Result<Presentation> {
    let gens = s.min_generators().to_vec();
    let plane = is_plane(s);
    let best_effort = !plane.plane;
    if best_effort {
        let d = gcd_chain(&gens);
        let decreasing = d.windows(2).all(|w| w[1] < w[0]);
        if gens.len() > 3 || !decreasing {
            return Err(PresentationError::NotPlane(plane.violation.expect("not plane")));
        }
    }
    let q = quotients(s);
    let mut rels = Vec::with_capacity(q.len());
    for j in 1..gens.len() {
        let p = q[j - 1];
        let target = p * gens[j];
        let n = normal_form(s, target)?;
        if n.0[j..].iter().any(|&x| x != 0) {
            return Err(PresentationError::NoPresentation(format!(
                "{p}*{} needs Y{j} or later",
                gens[j]
            )));
        }
        let monomial = ExponentVector(n.0[..j].to_vec());
        assert_eq!(monomial.value(&gens), target, "degree balance");
        rels.push(Relation {
            index: j,
            power: p,
            monomial,
        });
    }
    let pres = Presentation {
        generators: gens,
        relations: rels,
        best_effort,
    };
    if best_effort {
        let gf = GeneratingFunction::of_presentation(&pres);
        let n = s.conductor() + 50;
        let coeffs = expand_gf(&gf, n);
        let ok = coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| c == i128::from(s.contains(i as u64)));
        if !ok {
            return Err(PresentationError::NoPresentation(
                "candidate relations do not reproduce the Hilbert series".into(),
            ));
        }
    }
    Ok(pres)
}

/// Initial forms `Y_j^{p_j}` of the relations, after checking that each
/// monomial side has total degree above `p_j`.
pub fn graded_relations(s: &NumericalSemigroup) -> Result<Vec<(usize, u64)>> {
    require_plane(s)?;
    let pres = relations(s)?;
    Ok(pres
        .relations
        .iter()
        .map(|r| {
            assert!(
                r.monomial.total_degree() > r.power,
                "initial form of relation {} is not a pure power",
                r.index
            );
            (r.index, r.power)
        })
        .collect())
}

/// `Π (1 - t^{a}) / Π (1 - t^{b})` over the listed exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingFunction {
    pub numerator: Vec<u64>,
    pub denominator: Vec<u64>,
}

impl GeneratingFunction {
    fn of_presentation(p: &Presentation) -> Self {
        Self {
            numerator: p
                .relations
                .iter()
                .map(|r| r.power * p.generators[r.index])
                .collect(),
            denominator: p.generators.clone(),
        }
    }
}

fn factor(f: &mut fmt::Formatter<'_>, e: u64) -> fmt::Result {
    if e == 1 {
        write!(f, "(1-t)")
    } else {
        write!(f, "(1-t^{e})")
    }
}

/// `(1-t^24)(1-t^52)/((1-t^8)(1-t^12)(1-t^26))`
impl fmt::Display for GeneratingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_empty() {
            write!(f, "1")?;
        }
        for &e in &self.numerator {
            factor(f, e)?;
        }
        write!(f, "/")?;
        if self.denominator.len() > 1 {
            write!(f, "(")?;
        }
        for &e in &self.denominator {
            factor(f, e)?;
        }
        if self.denominator.len() > 1 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `Σ_{i ∈ S} t^i` as a rational function.
pub fn generating_function(s: &NumericalSemigroup) -> Result<GeneratingFunction> {
    require_plane(s)?;
    Ok(GeneratingFunction::of_presentation(&relations(s)?))
}

/// Coefficients of `t^0, ..., t^n`.
pub fn expand_gf(gf: &GeneratingFunction, n: u64) -> Vec<i128> {
    let len = n as usize + 1;
    let mut c = vec![0i128; len];
    c[0] = 1;
    for &a in &gf.numerator {
        let a = a as usize;
        for i in (a..len).rev() {
            c[i] -= c[i - a];
        }
    }
    for &b in &gf.denominator {
        let b = b as usize;
        for i in b..len {
            c[i] += c[i - b];
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn normal_forms() {
        let s = sg(&[8, 12, 26, 53]);
        assert_eq!(normal_form(&s, 52).unwrap().0, vec![5, 1, 0, 0]);
        assert_eq!(normal_form(&s, 0).unwrap().0, vec![0, 0, 0, 0]);
        assert_eq!(
            normal_form(&s, 83),
            Err(PresentationError::NotMember { value: 83 })
        );
        assert_eq!(normal_form(&sg(&[4, 6, 7]), 14).unwrap().0, vec![2, 1, 0]);
    }

    #[test]
    fn lex_min_fallback() {
        // <4,5,6>: chain 4,1,1 so no bounded form; 10 = 5+5 = 4+6
        assert_eq!(normal_form(&sg(&[4, 5, 6]), 10).unwrap().0, vec![0, 2, 0]);
        assert_eq!(normal_form(&sg(&[4, 5, 6]), 12).unwrap().0, vec![3, 0, 0]);
    }

    #[test]
    fn minimal_vectors() {
        let m = minimals(&sg(&[8, 12, 26, 53])).unwrap();
        assert_eq!(m.iter().map(|v| v.0.clone()).collect::<Vec<_>>(), vec![
            vec![2, 0, 0],
            vec![0, 2, 0],
            vec![0, 0, 2]
        ]);
        assert_eq!(minimals(&sg(&[2, 3])).unwrap()[0].0, vec![2]);
        let m = minimals(&sg(&[30, 42, 280, 855])).unwrap();
        assert_eq!(m[0].0, vec![5, 0, 0]);
        assert_eq!(m[1].0, vec![0, 3, 0]);
        assert!(minimals(&sg(&[6, 10, 29])).is_err());
    }

    #[test]
    fn relation_examples() {
        let p = relations(&sg(&[8, 12, 26, 53])).unwrap();
        let shown: Vec<String> = p.relations.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, vec!["Y1^2 = Y0^3", "Y2^2 = Y0^5*Y1", "Y3^2 = Y0^10*Y2"]);
        assert!(!p.best_effort);

        let p = relations(&sg(&[4, 6, 7])).unwrap();
        let shown: Vec<String> = p.relations.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, vec!["Y1^2 = Y0^3", "Y2^2 = Y0^2*Y1"]);
        assert!(p.best_effort);

        let p = relations(&sg(&[2, 3])).unwrap();
        assert_eq!(p.relations[0].to_string(), "Y1^2 = Y0^3");
        assert!(relations(&sg(&[4, 5, 6])).is_err());
    }

    #[test]
    fn graded_examples() {
        assert_eq!(
            graded_relations(&sg(&[8, 12, 26, 53])).unwrap(),
            vec![(1, 2), (2, 2), (3, 2)]
        );
        assert_eq!(graded_relations(&sg(&[2, 3])).unwrap(), vec![(1, 2)]);
        assert_eq!(
            graded_relations(&sg(&[30, 42, 280, 855])).unwrap(),
            vec![(1, 5), (2, 3), (3, 2)]
        );
        assert!(graded_relations(&sg(&[4, 6, 7])).is_err());
    }

    #[test]
    fn generating_functions() {
        let gf = generating_function(&sg(&[8, 12, 26, 53])).unwrap();
        assert_eq!(
            gf.to_string(),
            "(1-t^24)(1-t^52)(1-t^106)/((1-t^8)(1-t^12)(1-t^26)(1-t^53))"
        );
        let gf = generating_function(&sg(&[30, 42, 280, 855])).unwrap();
        assert_eq!(gf.numerator, vec![210, 840, 1710]);
        let n = generating_function(&NumericalSemigroup::naturals()).unwrap();
        assert_eq!(n.to_string(), "1/(1-t)");
        assert!(expand_gf(&n, 20).iter().all(|&c| c == 1));
    }

    #[test]
    fn expansions() {
        let gf = generating_function(&sg(&[2, 3])).unwrap();
        assert_eq!(expand_gf(&gf, 6), vec![1, 0, 1, 1, 1, 1, 1]);
        let gf = generating_function(&sg(&[8, 12, 26, 53])).unwrap();
        let c = expand_gf(&gf, 84);
        assert_eq!((c[83], c[84]), (0, 1));
    }
}
