use num_integer::Integer;
use proptest::prelude::*;

use planebranch::branch::PlaneBranch;
use planebranch::multseq::euclid_m;
use planebranch::parser::{parse_branch, parse_multseq, parse_semigroup, render_branch, render_multseq};
use planebranch::semigroup::{descend, lift, NumericalSemigroup};
use planebranch::series::{dvector, ratio, Rational, TruncatedSeries};

fn coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| ratio(if n == 0 { 1 } else { n }, d))
}

/// Sparse series with terms in `[lo, 20)` at precision 20.
fn series(lo: u64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::btree_map(lo..20u64, coeff(), 1..6)
        .prop_map(|m| TruncatedSeries::from_terms(m, 20))
}

fn unit() -> impl Strategy<Value = TruncatedSeries> {
    (coeff(), series(1)).prop_map(|(c, s)| s.add(&TruncatedSeries::monomial(c, 0, 20)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_commutes_and_associates(a in series(0), b in series(0), c in series(0)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn div_inverts_mul(a in series(0), b in unit()) {
        let q = a.mul(&b).div(&b).unwrap();
        prop_assert_eq!(q, a);
    }

    #[test]
    fn root_then_power(m in 1u64..5, w in series(1)) {
        let s = TruncatedSeries::monomial(Rational::from_integer(1.into()), m, 20 + m)
            .mul(&TruncatedSeries::one(20).add(&w));
        let r = s.formal_root(m).unwrap();
        prop_assert_eq!(r.pow(m).truncate(s.precision()), s.truncate(r.pow(m).precision()));
    }

    #[test]
    fn reversion_is_inverse(w in series(1)) {
        let tau = TruncatedSeries::one(20).add(&w).shift(1);
        let sigma = tau.reversion().unwrap();
        let back = tau.compose_with_tangent(&sigma).unwrap();
        prop_assert_eq!(back, TruncatedSeries::monomial(Rational::from_integer(1.into()), 1, 21));
    }

    #[test]
    fn dvector_lemma(g in unit(), h in unit()) {
        let divisors = [6, 3];
        if let (Ok(dg), Ok(dh)) = (dvector(&g, &divisors), dvector(&h, &divisors)) {
            let min = dg.pointwise_min(&dh);
            for (i, &d) in divisors.iter().enumerate() {
                let e = dvector(&g.mul(&h), &[d]).map(|v| v.epsilons[0]).unwrap_or(20);
                prop_assert!(e >= min.epsilons[i]);
            }
            prop_assert_eq!(dvector(&g.mul(&g), &divisors).unwrap(), dg);
        }
    }

    #[test]
    fn branch_render_parses_back(m in 2u64..7, y in series(3)) {
        let x = TruncatedSeries::monomial(Rational::from_integer(1.into()), m, 20);
        if let Ok(b) = PlaneBranch::new(x, y) {
            let text = render_branch(&b);
            prop_assert_eq!(parse_branch(&text).unwrap(), b);
        }
    }

    #[test]
    fn descend_lift_round_trip(gens in prop::collection::vec(2u64..30, 1..4), extra in 1u64..30) {
        let mut gens = gens;
        gens.push(gens[0] * 7 + 1);
        gens.push(extra);
        if let Ok(s) = NumericalSemigroup::from_generators(&gens) {
            let m = s.multiplicity();
            let ap = s.apery_set(m).unwrap();
            if let Ok(down) = descend(&ap) {
                prop_assert_eq!(lift(&down).unwrap(), ap.clone());
            }
            // lifting may leave the semigroups; when it does not, it inverts descent
            if let Ok(up) = lift(&ap) {
                prop_assert_eq!(descend(&up).unwrap(), ap);
            }
        }
    }

    #[test]
    fn euclid_blocks_sum(m in 1u64..200, n in 1u64..200) {
        let e = euclid_m(m, n);
        prop_assert_eq!(e.iter().sum::<u64>(), m + n - m.gcd(&n));
        prop_assert_eq!(e.iter().map(|x| x * x).sum::<u64>(), m * n);
    }

    #[test]
    fn semigroup_and_multseq_text(gens in prop::collection::vec(2u64..40, 2..5), runs in prop::collection::vec((2u64..9, 1u64..4), 0..4)) {
        if let Ok(s) = NumericalSemigroup::from_generators(&gens) {
            let text = s.to_string();
            prop_assert_eq!(parse_semigroup(&text).unwrap(), s.min_generators().to_vec());
        }
        let mut runs = runs;
        runs.sort_by(|a, b| b.0.cmp(&a.0));
        runs.dedup_by_key(|r| r.0);
        let e = planebranch::multseq::MultiplicitySequence::from_runs(&runs).unwrap();
        prop_assert_eq!(parse_multseq(&render_multseq(&e)).unwrap(), e);
    }
}
