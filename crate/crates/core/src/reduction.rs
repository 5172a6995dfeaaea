//! Order reduction of `F∘F` on level sets `{W = w}` for `k = 3` and `k = 5`.
//!
//! On `{W = w}` one coordinate is a function of the others, with
//! `kappa = 1/w`:
//!
//! - `k = 3`: `y = kappa (x+1)(z+1)`, reduced state `(x, z)`;
//! - `k = 5`: `t = kappa (x+1)(z+1)(s+1)/y`, reduced state `(x, y, z, s)`.
//!
//! Because `W` is invariant under `F∘F`, the level and hence `kappa` stay
//! fixed along the reduced orbit.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::eval_w;
use crate::map::{lyness_power, Params};
use crate::scalar::{Rat, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedParams<S> {
    pub a: S,
    /// Reciprocal of the `W` level.
    pub kappa: S,
}

impl<S: Scalar> ReducedParams<S> {
    pub fn new(a: S, kappa: S) -> Result<Self> {
        if a.sign() < 0 {
            return Err(Error::domain("parameter a must be >= 0"));
        }
        if kappa.sign() <= 0 {
            return Err(Error::domain("kappa must be > 0"));
        }
        Ok(ReducedParams { a, kappa })
    }

    /// Reduction parameters for the level of `W` through `x` (odd `k`).
    pub fn for_point(p: &Params<S>, x: &[S]) -> Result<Self> {
        let w = eval_w(p, x)?;
        Self::new(p.a.clone(), S::one() / w)
    }
}

fn check_positive<S: Scalar>(values: &[S]) -> Result<()> {
    if values.iter().any(|v| v.sign() <= 0) {
        return Err(Error::domain("reduced coordinates must be positive"));
    }
    Ok(())
}

/// `(x, z) -> (x, kappa (x+1)(z+1), z)`.
pub fn lift_k3<S: Scalar>(rp: &ReducedParams<S>, state: &[S; 2]) -> Result<Vec<S>> {
    check_positive(state)?;
    let [x, z] = state.clone();
    let y = rp.kappa.clone() * (x.clone() + S::one()) * (z.clone() + S::one());
    Ok(vec![x, y, z])
}

pub fn project_k3<S: Scalar>(x: &[S]) -> [S; 2] {
    [x[0].clone(), x[2].clone()]
}

/// `(x, z) -> (z, (a + kappa + z(kappa+1)) / (kappa x (z+1)))`.
pub fn reduced_step_k3<S: Scalar>(rp: &ReducedParams<S>, state: &[S; 2]) -> Result<[S; 2]> {
    check_positive(state)?;
    let [x, z] = state.clone();
    let kappa = rp.kappa.clone();
    let num = rp.a.clone() + kappa.clone() + z.clone() * (kappa.clone() + S::one());
    let den = kappa * x * (z.clone() + S::one());
    Ok([z, num / den])
}

fn fourth_k5<S: Scalar>(rp: &ReducedParams<S>, x: &S, y: &S, z: &S, s: &S) -> S {
    rp.kappa.clone() * (x.clone() + S::one()) * (z.clone() + S::one()) * (s.clone() + S::one()) / y.clone()
}

/// `(x, y, z, s) -> (x, y, z, kappa (x+1)(z+1)(s+1)/y, s)`.
pub fn lift_k5<S: Scalar>(rp: &ReducedParams<S>, state: &[S; 4]) -> Result<Vec<S>> {
    check_positive(state)?;
    let [x, y, z, s] = state.clone();
    let t = fourth_k5(rp, &x, &y, &z, &s);
    Ok(vec![x, y, z, t, s])
}

pub fn project_k5<S: Scalar>(x: &[S]) -> [S; 4] {
    [x[0].clone(), x[1].clone(), x[2].clone(), x[4].clone()]
}

/// `(x, y, z, s) -> (z, t, s, (p2 x² + p1 x + p0) / (x y²))` with
/// `t = kappa (x+1)(z+1)(s+1)/y` and
///
/// ```text
/// p2 = kappa (s+1)(z+1)
/// p1 = 2 kappa (s+1)(z+1) + y (a + s + z)
/// p0 = kappa (s+1)(z+1) + y (z + s + a + y)
/// ```
///
/// The output is the `(1, 2, 3, 5)` projection of `F∘F` applied to the lift.
pub fn reduced_step_k5<S: Scalar>(rp: &ReducedParams<S>, state: &[S; 4]) -> Result<[S; 4]> {
    check_positive(state)?;
    let [x, y, z, s] = state.clone();
    let a = rp.a.clone();
    let base = rp.kappa.clone() * (s.clone() + S::one()) * (z.clone() + S::one());
    let p2 = base.clone();
    let p1 = S::from_i64(2) * base.clone() + y.clone() * (a.clone() + s.clone() + z.clone());
    let p0 = base + y.clone() * (z.clone() + s.clone() + a + y.clone());
    let last = (p2 * x.clone() * x.clone() + p1 * x.clone() + p0) / (x.clone() * y.clone() * y.clone());
    let t = fourth_k5(rp, &x, &y, &z, &s);
    Ok([z, t, s, last])
}

/// Runs `n` reduced steps from the projection of `x0` (with
/// `kappa = 1/W(x0)`) alongside `n` steps of `F∘F` from `x0`, and returns the
/// largest coordinate deviation between the projected full orbit and the
/// reduced orbit. Exact arithmetic makes any nonzero value a failure.
///
/// Heights of exact orbits grow quickly, and normalising every intermediate
/// rational dominates the cost. The reduced map is therefore first checked
/// one step at a time against the full orbit using unreduced fractions
/// compared by cross-multiplication; agreement at every step is equivalent to
/// agreement of the two orbits. Only on a mismatch is the reduced orbit run
/// independently to measure the deviation.
pub fn semiconjugacy_residual(p: &Params<Rat>, x0: &[Rat], n: usize) -> Result<Rat> {
    let rp = ReducedParams::for_point(p, x0)?;
    let mut full = vec![x0.to_vec()];
    for _ in 0..n {
        let next = lyness_power(p, full.last().expect("nonempty"), 2)?;
        full.push(next);
    }
    let frp = ReducedParams {
        a: Frac::from(&rp.a),
        kappa: Frac::from(&rp.kappa),
    };
    let lazy = |x: &[Rat]| x.iter().map(Frac::from).collect::<Vec<_>>();
    let stepwise = match p.k {
        3 => full.windows(2).all(|w| {
            let image = reduced_step_k3(&frp, &project_k3(&lazy(&w[0])));
            image.is_ok_and(|r| r.to_vec() == lazy(&project_k3(&w[1])))
        }),
        5 => full.windows(2).all(|w| {
            let image = reduced_step_k5(&frp, &project_k5(&lazy(&w[0])));
            image.is_ok_and(|r| r.to_vec() == lazy(&project_k5(&w[1])))
        }),
        k => {
            return Err(Error::UnsupportedDimension {
                k,
                what: "order reduction is provided for k in {3, 5}",
            })
        }
    };
    if stepwise {
        return Ok(Rat::from_integer(0.into()));
    }

    let mut worst = Rat::from_integer(0.into());
    let mut track = |a: &[Rat], b: &[Rat]| {
        for (u, v) in a.iter().zip(b) {
            let d = Signed::abs(&(u - v));
            if d > worst {
                worst = d;
            }
        }
    };
    if p.k == 3 {
        let mut reduced = project_k3(x0);
        for state in &full[1..] {
            reduced = reduced_step_k3(&rp, &reduced)?;
            track(&project_k3(state), &reduced);
        }
    } else {
        let mut reduced = project_k5(x0);
        for state in &full[1..] {
            reduced = reduced_step_k5(&rp, &reduced)?;
            track(&project_k5(state), &reduced);
        }
    }
    Ok(worst)
}

/// Fraction kept unreduced, with a positive denominator; equality and order
/// use cross-multiplication.
#[derive(Debug, Clone)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl From<&Rat> for Frac {
    fn from(r: &Rat) -> Self {
        Frac {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (&self.num * &other.den).partial_cmp(&(&other.num * &self.den))
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        Frac {
            num: self.num * &rhs.den + rhs.num * &self.den,
            den: self.den * rhs.den,
        }
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, rhs: Frac) -> Frac {
        self + (-rhs)
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, rhs: Frac) -> Frac {
        Frac {
            num: self.num * rhs.num,
            den: self.den * rhs.den,
        }
    }
}

impl Div for Frac {
    type Output = Frac;
    fn div(self, rhs: Frac) -> Frac {
        // Division by zero leaves a zero denominator, which compares equal
        // to nothing but other zero-denominator values.
        let (num, den) = (self.num * &rhs.den, self.den * rhs.num);
        if den.is_negative() {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Zero for Frac {
    fn zero() -> Self {
        Frac {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero() && !self.den.is_zero()
    }
}

impl One for Frac {
    fn one() -> Self {
        Frac {
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }
}

impl Scalar for Frac {
    fn from_i64(n: i64) -> Self {
        Frac {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    fn from_rat(r: &Rat) -> Self {
        Frac::from(r)
    }

    fn to_f64(&self) -> f64 {
        Rat::new(self.num.clone(), self.den.clone()).to_f64()
    }

    fn sign(&self) -> i8 {
        if self.den.is_zero() {
            0
        } else if self.num.is_positive() {
            1
        } else if self.num.is_negative() {
            -1
        } else {
            0
        }
    }
}
