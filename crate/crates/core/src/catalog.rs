//! Enumeration of plane-branch semigroups up to a conductor bound.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::multseq;
use crate::parser::{json_u64, json_u64s, multseq_json, render_json};
use crate::branch::CharExponents;
use crate::presentation;
use crate::semigroup::{self, NumericalSemigroup};

/// One catalog line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogRecord {
    pub semigroup: NumericalSemigroup,
    pub exps: CharExponents,
}

impl CatalogRecord {
    fn new(gens: &[u64]) -> Self {
        let semigroup = NumericalSemigroup::from_generators(gens).expect("coprime generators");
        let delta = semigroup::realization_exponents(&semigroup).expect("plane by construction");
        let exps = CharExponents::new(delta).expect("valid exponents");
        Self { semigroup, exps }
    }

    pub fn to_json(&self) -> Value {
        let gf = presentation::generating_function(&self.semigroup).expect("plane");
        let seq = multseq::from_char_exponents(&self.exps);
        json!({
            "generators": json_u64s(self.semigroup.min_generators()),
            "delta": json_u64s(&self.exps.delta),
            "conductor": json_u64(self.semigroup.conductor()),
            "multiplicity_sequence": multseq_json(&seq)["runs"].clone(),
            "generating_function": {
                "numerator": json_u64s(&gf.numerator),
                "denominator": json_u64s(&gf.denominator),
            },
        })
    }
}

/// Extends `gens` (with gcd chain `d`) by generators satisfying
/// `d_{i-1} > d_i` and `a_i > lcm(d_{i-2}, a_{i-1})`, keeping the partial
/// conductor `Σ (d_{i-1}/d_i - 1)(a_i - d_i)` within `max_c`.
fn extend(gens: &mut Vec<u64>, d: &mut Vec<u64>, partial: u64, max_c: u64, out: &mut Vec<Vec<u64>>) {
    let i = gens.len();
    let dp = d[i - 1];
    if dp == 1 {
        out.push(gens.clone());
        return;
    }
    let lower = if i == 1 {
        gens[0] + 1
    } else {
        d[i - 2].lcm(&gens[i - 1]) + 1
    };
    let mut a = lower;
    loop {
        let di = dp.gcd(&a);
        if di < dp {
            let term = (dp / di - 1) * (a - di);
            // the term grows with a for fixed di, and is at least a - dp/2
            if partial + term <= max_c {
                gens.push(a);
                d.push(di);
                extend(gens, d, partial + term, max_c, out);
                gens.pop();
                d.pop();
            }
        }
        // any later a has term >= a + 1 - dp/2 > max_c - partial
        if partial + (a + 1).saturating_sub(dp / 2) > max_c {
            break;
        }
        a += 1;
    }
}

/// All plane semigroups with conductor at most `max_conductor`, sorted by
/// generators. ℕ is included only on request.
pub fn enumerate(max_conductor: u64, include_regular: bool) -> Vec<CatalogRecord> {
    // conductor = Σ e(e-1) >= a_0 (a_0 - 1)
    let mut top = 2;
    while (top + 1) * top <= max_conductor {
        top += 1;
    }
    let mut all: Vec<Vec<u64>> = (2..=top)
        .into_par_iter()
        .flat_map_iter(|a0| {
            let mut out = Vec::new();
            if a0 * (a0 - 1) <= max_conductor {
                extend(&mut vec![a0], &mut vec![a0], 0, max_conductor, &mut out);
            }
            out
        })
        .collect();
    if include_regular {
        all.push(vec![1]);
    }
    all.sort();
    all.iter().map(|g| CatalogRecord::new(g)).collect()
}

/// Writes the catalog as JSON lines and returns the record count.
pub fn catalog_enumerate(
    max_conductor: u64,
    out_path: &Path,
    include_regular: bool,
) -> io::Result<usize> {
    let records = enumerate(max_conductor, include_regular);
    let mut w = BufWriter::new(File::create(out_path)?);
    for r in &records {
        writeln!(w, "{}", render_json(&r.to_json()))?;
    }
    w.flush()?;
    Ok(records.len())
}

/// Catalog as a string, one record per line.
pub fn render_catalog(records: &[CatalogRecord]) -> String {
    records
        .iter()
        .map(|r| render_json(&r.to_json()) + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(c: u64) -> Vec<Vec<u64>> {
        enumerate(c, false)
            .into_iter()
            .map(|r| r.semigroup.min_generators().to_vec())
            .collect()
    }

    #[test]
    fn small_catalogs() {
        assert_eq!(
            gens(12),
            vec![
                vec![2, 3],
                vec![2, 5],
                vec![2, 7],
                vec![2, 9],
                vec![2, 11],
                vec![2, 13],
                vec![3, 4],
                vec![3, 5],
                vec![3, 7],
                vec![4, 5],
            ]
        );
        assert_eq!(gens(2), vec![vec![2, 3]]);
        assert!(gens(1).is_empty());
        assert_eq!(enumerate(1, true).len(), 1);
    }

    #[test]
    fn conductors_within_bound() {
        for r in enumerate(60, false) {
            assert!(r.semigroup.conductor() <= 60);
            assert!(semigroup::is_plane(&r.semigroup).plane);
        }
        assert!(gens(16).contains(&vec![4, 6, 13]));
    }

    #[test]
    fn record_json() {
        let r = &enumerate(2, false)[0];
        assert_eq!(
            render_json(&r.to_json()),
            "{\"conductor\":2,\"delta\":[2,3],\"generating_function\":{\"denominator\":[2,3],\"numerator\":[6]},\"generators\":[2,3],\"multiplicity_sequence\":[[2,1]]}"
        );
    }
}
