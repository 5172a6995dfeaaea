//! Conserved quantities of the Lyness map.
//!
//! For every `k`:
//!
//! ```text
//! V1 = (a + Σ xi) · Π (xi + 1) / Π xi
//! V2 = (a + Σ xi + x1·xk) · Π_{i<k} (1 + xi + x_{i+1}) / Π xi
//! ```
//!
//! For odd `k = 2l + 1` there is additionally the 2-integral
//! `W = Π_{odd i} (xi + 1) / Π_{even i} xi` (indices 1-based), from which
//! `V3 = W + W∘F` and `V1 = W · W∘F`. The polynomial
//! `Z = Π·(W - W∘F)` vanishes on the invariant set `G` and satisfies
//! `Z∘F = det(DF)·Z`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::map::{product, step_unchecked, sum, Params};
use crate::matrix::{exact_rank, RatMatrix};
use crate::scalar::{gradient, Rat, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    V1,
    V2,
    V3,
}

impl Invariant {
    pub const ALL: [Invariant; 3] = [Invariant::V1, Invariant::V2, Invariant::V3];
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::V1 => "V1",
            Invariant::V2 => "V2",
            Invariant::V3 => "V3",
        })
    }
}

impl FromStr for Invariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "V1" => Ok(Invariant::V1),
            "V2" => Ok(Invariant::V2),
            "V3" => Ok(Invariant::V3),
            _ => Err(Error::domain(format!("unknown invariant {s:?}"))),
        }
    }
}

fn require_odd(k: usize, what: &'static str) -> Result<()> {
    if k % 2 == 0 {
        Err(Error::UnsupportedDimension { k, what })
    } else {
        Ok(())
    }
}

pub fn eval_v1<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    p.check_point(x)?;
    let num = (p.a.clone() + sum(x)) * product(x.iter().map(|v| v.clone() + S::one()));
    Ok(num / product(x.iter().cloned()))
}

pub fn eval_v2<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    p.check_point(x)?;
    let k = p.k;
    let lead = p.a.clone() + sum(x) + x[0].clone() * x[k - 1].clone();
    let links = product(x.windows(2).map(|w| S::one() + w[0].clone() + w[1].clone()));
    Ok(lead * links / product(x.iter().cloned()))
}

/// The 2-integral `W`, defined for odd `k`.
pub fn eval_w<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    require_odd(p.k, "W is defined only for odd k")?;
    p.check_point(x)?;
    Ok(w_unchecked(x))
}

fn w_unchecked<S: Scalar>(x: &[S]) -> S {
    let num = product(x.iter().step_by(2).map(|v| v.clone() + S::one()));
    let den = product(x.iter().skip(1).step_by(2).cloned());
    num / den
}

/// `V3` from its closed form
/// `[Π_{odd} xi(xi+1) + (a + Σx) Π_{even} xi(xi+1)] / Π xi`.
pub fn eval_v3<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    require_odd(p.k, "V3 is defined only for odd k")?;
    p.check_point(x)?;
    let (odd, even) = parity_products(x);
    Ok((odd + (p.a.clone() + sum(x)) * even) / product(x.iter().cloned()))
}

/// `V3` through the 2-integral: `W(x) + W(F(x))`.
pub fn eval_v3_via_w<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    let w = eval_w(p, x)?;
    Ok(w + w_unchecked(&step_unchecked(p, x)))
}

/// `(Π_{odd i} xi(xi+1), Π_{even i} xi(xi+1))` with 1-based parity.
fn parity_products<S: Scalar>(x: &[S]) -> (S, S) {
    let pronic = |v: &S| v.clone() * (v.clone() + S::one());
    (
        product(x.iter().step_by(2).map(pronic)),
        product(x.iter().skip(1).step_by(2).map(pronic)),
    )
}

/// Polynomial form `Z = Π_{odd} xi(xi+1) - (a + Σx) Π_{even} xi(xi+1)`.
///
/// Only the length of `x` is checked: `Z` is a polynomial and may be
/// evaluated anywhere.
pub fn eval_z<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    require_odd(p.k, "Z is defined only for odd k")?;
    if x.len() != p.k {
        return Err(Error::DimensionMismatch {
            expected: p.k,
            got: x.len(),
        });
    }
    let (odd, even) = parity_products(x);
    Ok(odd - (p.a.clone() + sum(x)) * even)
}

/// `Π(x) = x1 · x2 ··· xk`.
pub fn eval_pi<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    p.check_point(x)?;
    Ok(product(x.iter().cloned()))
}

pub fn eval_invariant<S: Scalar>(p: &Params<S>, which: Invariant, x: &[S]) -> Result<S> {
    match which {
        Invariant::V1 => eval_v1(p, x),
        Invariant::V2 => eval_v2(p, x),
        Invariant::V3 => eval_v3(p, x),
    }
}

/// The invariant values identifying the level set through a point.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSignature<S> {
    pub v1: S,
    pub v2: S,
    /// Present for odd `k`.
    pub v3: Option<S>,
    /// Sign of `Z`, present for odd `k`.
    pub z_sign: Option<i8>,
}

pub fn level_signature<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<LevelSignature<S>> {
    let odd = p.k % 2 == 1;
    Ok(LevelSignature {
        v1: eval_v1(p, x)?,
        v2: eval_v2(p, x)?,
        v3: if odd { Some(eval_v3(p, x)?) } else { None },
        z_sign: if odd { Some(eval_z(p, x)?.sign()) } else { None },
    })
}

/// Exact gradient of one of the first integrals.
pub fn invariant_gradient(p: &Params<Rat>, which: Invariant, x: &[Rat]) -> Result<Vec<Rat>> {
    if which == Invariant::V3 {
        require_odd(p.k, "V3 is defined only for odd k")?;
    }
    p.check_point(x)?;
    let dp = p.dual();
    gradient(|y| eval_invariant(&dp, which, y), x)
}

/// Exact rank of the gradients of `which` at `x`.
///
/// Rank `r` at a single rational point proves the `r` integrals are
/// functionally independent; a deficit flags non-transversality there.
pub fn independence_rank(p: &Params<Rat>, x: &[Rat], which: &[Invariant]) -> Result<usize> {
    let rows = which
        .iter()
        .map(|&w| invariant_gradient(p, w, x))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(exact_rank(&RatMatrix::from_rows(rows)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{jacobian_det, lyness_power, lyness_step, two_periodic_point};
    use crate::sampling::{ints, random_point, seeded_rng};

    fn p(k: usize, a: i64) -> Params<Rat> {
        Params::from_i64(k, a).unwrap()
    }

    fn int(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    #[test]
    fn golden_values_k3() {
        let pr = p(3, 1);
        assert_eq!(eval_v1(&pr, &ints(&[1, 1, 1])).unwrap(), int(32));
        assert_eq!(eval_v1(&pr, &ints(&[1, 1, 3])).unwrap(), int(32));
        assert_eq!(eval_v2(&pr, &ints(&[1, 1, 1])).unwrap(), int(45));
        assert_eq!(eval_v2(&pr, &ints(&[1, 1, 3])).unwrap(), int(45));
        assert_eq!(eval_v2(&pr, &ints(&[1, 3, 5])).unwrap(), int(45));
        assert_eq!(eval_w(&pr, &ints(&[1, 1, 1])).unwrap(), int(4));
        assert_eq!(eval_w(&pr, &ints(&[1, 1, 3])).unwrap(), int(8));
        assert_eq!(eval_w(&pr, &ints(&[1, 3, 5])).unwrap(), int(4));
        assert_eq!(eval_v3(&pr, &ints(&[1, 1, 1])).unwrap(), int(12));
        assert_eq!(eval_v3_via_w(&pr, &ints(&[1, 1, 1])).unwrap(), int(12));
        assert_eq!(eval_z(&pr, &ints(&[1, 1, 1])).unwrap(), int(-4));
        assert_eq!(eval_z(&pr, &ints(&[1, 1, 3])).unwrap(), int(12));
        assert_eq!(eval_pi(&pr, &ints(&[1, 1, 1])).unwrap(), int(1));
        assert_eq!(eval_pi(&pr, &ints(&[1, 1, 3])).unwrap(), int(3));
    }

    #[test]
    fn golden_values_k5() {
        let pr = p(5, 1);
        let x = ints(&[1, 2, 3, 4, 5]);
        let fx = ints(&[2, 3, 4, 5, 15]);
        assert_eq!(eval_v1(&pr, &x).unwrap(), int(96));
        assert_eq!(eval_v2(&pr, &x).unwrap(), int(336));
        assert_eq!(eval_w(&pr, &x).unwrap(), int(6));
        assert_eq!(eval_w(&pr, &fx).unwrap(), int(16));
        assert_eq!(eval_v3(&pr, &x).unwrap(), int(22));
        assert_eq!(eval_v3_via_w(&pr, &x).unwrap(), int(22));
        assert_eq!(eval_z(&pr, &x).unwrap(), int(-1200));
        assert_eq!(eval_z(&pr, &fx).unwrap(), int(18000));
        assert_eq!(eval_pi(&pr, &x).unwrap(), int(120));
        assert_eq!(eval_pi(&pr, &fx).unwrap(), int(1800));
    }

    #[test]
    fn odd_only_quantities_reject_even_k() {
        let x = ints(&[1, 2, 3, 4]);
        for r in [eval_w(&p(4, 1), &x), eval_v3(&p(4, 1), &x), eval_z(&p(4, 1), &x)] {
            assert!(matches!(r, Err(Error::UnsupportedDimension { k: 4, .. })));
        }
        assert!(independence_rank(&p(4, 1), &x, &Invariant::ALL).is_err());
        assert_eq!(level_signature(&p(4, 1), &x).unwrap().v3, None);
    }

    #[test]
    fn product_route_matches_v1() {
        let pr = p(3, 1);
        let x = ints(&[1, 1, 1]);
        let fx = lyness_step(&pr, &x).unwrap();
        let prod = eval_w(&pr, &x).unwrap() * eval_w(&pr, &fx).unwrap();
        assert_eq!(prod, eval_v1(&pr, &x).unwrap());
    }

    #[test]
    fn transformation_laws_at_golden_points() {
        let pr = p(3, 1);
        let x = ints(&[1, 1, 1]);
        let fx = lyness_step(&pr, &x).unwrap();
        let det = jacobian_det(&pr, &x).unwrap();
        assert_eq!(eval_z(&pr, &fx).unwrap(), det.clone() * eval_z(&pr, &x).unwrap());
        assert_eq!(eval_pi(&pr, &fx).unwrap(), -det * eval_pi(&pr, &x).unwrap());
    }

    #[test]
    fn exact_invariance_at_random_points() {
        let mut rng = seeded_rng(11, 0);
        for k in 3..=8 {
            let pr = Params::new(k, Rat::new(7.into(), 3.into())).unwrap();
            for _ in 0..100 {
                let x = random_point(&mut rng, k);
                let fx = lyness_step(&pr, &x).unwrap();
                assert_eq!(eval_v1(&pr, &x).unwrap(), eval_v1(&pr, &fx).unwrap());
                assert_eq!(eval_v2(&pr, &x).unwrap(), eval_v2(&pr, &fx).unwrap());
                if k % 2 == 1 {
                    assert_eq!(eval_v3(&pr, &x).unwrap(), eval_v3(&pr, &fx).unwrap());
                    let f2x = lyness_power(&pr, &x, 2).unwrap();
                    assert_eq!(eval_w(&pr, &x).unwrap(), eval_w(&pr, &f2x).unwrap());
                    let z = eval_z(&pr, &x).unwrap();
                    let wf = eval_w(&pr, &fx).unwrap();
                    assert_eq!(z == Rat::from_integer(0.into()), eval_w(&pr, &x).unwrap() == wf);
                }
            }
        }
    }

    #[test]
    fn ranks() {
        let pr = p(5, 1);
        assert_eq!(independence_rank(&pr, &ints(&[1, 2, 3, 4, 5]), &Invariant::ALL).unwrap(), 3);
        let on_l = two_periodic_point(&pr, int(3)).unwrap();
        assert!(independence_rank(&pr, &on_l, &[Invariant::V1, Invariant::V2]).unwrap() < 2);
        assert_eq!(independence_rank(&pr, &ints(&[1, 2, 3, 4, 5]), &[]).unwrap(), 0);
    }

    #[test]
    fn invariant_names_round_trip() {
        for inv in Invariant::ALL {
            assert_eq!(inv.to_string().parse::<Invariant>().unwrap(), inv);
        }
        assert!("V4".parse::<Invariant>().is_err());
    }
}
