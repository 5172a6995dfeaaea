mod common;

use common::{any_rat, positive_rat};
use lyness::invariants::{eval_invariant, eval_w, Invariant};
use lyness::matrix::exact_rank;
use lyness::scalar::{format_rat, gradient};
use lyness::{parse_rational, Params, Rat, RatMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn lowest_terms(r: &Rat) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

/// Rank by Gaussian elimination in `f64` with partial pivoting.
fn float_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let (nr, nc) = (m.len(), m.first().map_or(0, Vec::len));
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())) else { break };
        if m[piv][c].abs() < 1e-9 {
            continue;
        }
        m.swap(rank, piv);
        for i in rank + 1..nr {
            let f = m[i][c] / m[rank][c];
            for j in c..nc {
                m[i][j] -= f * m[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], i: usize, h: f64) -> f64 {
    let mut up = x.to_vec();
    let mut down = x.to_vec();
    up[i] += h;
    down[i] -= h;
    (f(&up) - f(&down)) / (2.0 * h)
}

proptest! {
    #[test]
    fn addition_is_associative(a in any_rat(), b in any_rat(), c in any_rat()) {
        let left = (&a + &b) + &c;
        prop_assert_eq!(&left, &(&a + (&b + &c)));
        prop_assert!(lowest_terms(&left));
    }

    #[test]
    fn multiplication_is_associative(a in any_rat(), b in any_rat(), c in any_rat()) {
        let left = (&a * &b) * &c;
        prop_assert_eq!(&left, &(&a * (&b * &c)));
        prop_assert!(lowest_terms(&left));
    }

    #[test]
    fn reciprocal(a in any_rat()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * a.recip()).is_one());
    }

    #[test]
    fn format_parse_round_trip(a in any_rat()) {
        prop_assert_eq!(parse_rational(&format_rat(&a)).unwrap(), a);
    }

    #[test]
    fn exact_rank_matches_float_pivoting(
        rows in (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
        })
    ) {
        let slices: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = RatMatrix::from_i64_rows(&slices).unwrap();
        prop_assert_eq!(exact_rank(&m), float_rank(&rows));
        prop_assert_eq!(m.rank(), float_rank(&rows));
    }
}

#[test]
fn gradients_match_central_differences() {
    use rand::Rng;
    let mut rng = lyness::sampling::seeded_rng(7, 11);
    let h = 1e-6;
    for trial in 0..50 {
        let k = [3usize, 5][trial % 2];
        let a: f64 = rng.gen_range(0.0..=5.0);
        let x = lyness::sampling::random_real_point(&mut rng, k, 0.5, 10.0);
        let p = Params::new(k, a).unwrap();
        let dp = p.dual();
        let fs: [(&str, Box<dyn Fn(&[f64]) -> f64>); 4] = [
            ("V1", Box::new(|y| eval_invariant(&p, Invariant::V1, y).unwrap())),
            ("V2", Box::new(|y| eval_invariant(&p, Invariant::V2, y).unwrap())),
            ("V3", Box::new(|y| eval_invariant(&p, Invariant::V3, y).unwrap())),
            ("W", Box::new(|y| eval_w(&p, y).unwrap())),
        ];
        let grads = [
            gradient(|y| eval_invariant(&dp, Invariant::V1, y), &x).unwrap(),
            gradient(|y| eval_invariant(&dp, Invariant::V2, y), &x).unwrap(),
            gradient(|y| eval_invariant(&dp, Invariant::V3, y), &x).unwrap(),
            gradient(|y| eval_w(&dp, y), &x).unwrap(),
        ];
        for ((name, f), grad) in fs.iter().zip(&grads) {
            for i in 0..k {
                let fd = central_difference(f, &x, i, h);
                let err = (fd - grad[i]).abs() / grad[i].abs();
                assert!(err <= 1e-5, "{name} d/dx{} at {x:?}: dual {} vs fd {fd}", i + 1, grad[i]);
            }
        }
    }
}

proptest! {
    #[test]
    fn exact_gradient_agrees_with_float_gradient(x in common::point(5), a in positive_rat()) {
        let p = Params::new(5, a.clone()).unwrap();
        let exact = lyness::invariants::invariant_gradient(&p, Invariant::V2, &x).unwrap();
        let pf = p.to_f64();
        let xf: Vec<f64> = x.iter().map(lyness::Scalar::to_f64).collect();
        let float = gradient(|y| eval_invariant(&pf.dual(), Invariant::V2, y), &xf).unwrap();
        for (e, f) in exact.iter().zip(&float) {
            let e = lyness::Scalar::to_f64(e);
            prop_assert!((e - f).abs() <= 1e-9 * e.abs().max(1.0));
        }
    }
}
