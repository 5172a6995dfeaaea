//! The Lyness map, its inverse, Jacobian and distinguished orbits.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::invariants::LevelSignature;
use crate::matrix::RatMatrix;
use crate::scalar::{Dual, Rat, Scalar};

/// Dimension `k` and parameter `a >= 0` of the map.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<S> {
    pub k: usize,
    pub a: S,
}

impl<S: Scalar> Params<S> {
    pub fn new(k: usize, a: S) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedDimension {
                k,
                what: "the Lyness map needs k >= 2",
            });
        }
        if a.sign() < 0 {
            return Err(Error::domain(format!("parameter a = {a:?} must be >= 0")));
        }
        Ok(Params { k, a })
    }

    /// Same parameters with `a` as a constant dual number.
    pub fn dual(&self) -> Params<Dual<S>> {
        Params {
            k: self.k,
            a: Dual::constant(self.a.clone()),
        }
    }

    pub fn to_f64(&self) -> Params<f64> {
        Params {
            k: self.k,
            a: self.a.to_f64(),
        }
    }

    /// Checks that `x` has `k` strictly positive, finite coordinates.
    pub fn check_point(&self, x: &[S]) -> Result<()> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: x.len(),
            });
        }
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| v.sign() <= 0 || !v.is_finite()) {
            return Err(Error::domain(format!(
                "coordinate x{} = {v:?} is not in the open positive orthant",
                i + 1
            )));
        }
        Ok(())
    }
}

impl Params<Rat> {
    pub fn from_i64(k: usize, a: i64) -> Result<Self> {
        Params::new(k, Rat::from_integer(a.into()))
    }
}

pub(crate) fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, v| acc + v.clone())
}

pub(crate) fn product<S: Scalar>(xs: impl IntoIterator<Item = S>) -> S {
    xs.into_iter().fold(S::one(), |acc, v| acc * v)
}

/// `a + x2 + ... + xk`, the numerator of the new coordinate.
pub(crate) fn shifted_numerator<S: Scalar>(p: &Params<S>, x: &[S]) -> S {
    p.a.clone() + sum(&x[1..])
}

/// One step: `(x1..xk) -> (x2, ..., xk, (a + x2 + ... + xk) / x1)`.
pub fn lyness_step<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<Vec<S>> {
    p.check_point(x)?;
    Ok(step_unchecked(p, x))
}

pub(crate) fn step_unchecked<S: Scalar>(p: &Params<S>, x: &[S]) -> Vec<S> {
    let last = shifted_numerator(p, x) / x[0].clone();
    let mut y = Vec::with_capacity(x.len());
    y.extend_from_slice(&x[1..]);
    y.push(last);
    y
}

/// Inverse step: `(y1..yk) -> ((a + y1 + ... + y_{k-1}) / yk, y1, ..., y_{k-1})`.
pub fn lyness_inverse<S: Scalar>(p: &Params<S>, y: &[S]) -> Result<Vec<S>> {
    p.check_point(y)?;
    let k = p.k;
    let first = (p.a.clone() + sum(&y[..k - 1])) / y[k - 1].clone();
    let mut x = Vec::with_capacity(k);
    x.push(first);
    x.extend_from_slice(&y[..k - 1]);
    Ok(x)
}

/// Applies the map `n` times (`n < 0` applies the inverse).
pub fn lyness_power<S: Scalar>(p: &Params<S>, x: &[S], n: i64) -> Result<Vec<S>> {
    p.check_point(x)?;
    let mut cur = x.to_vec();
    for _ in 0..n.unsigned_abs() {
        cur = if n > 0 {
            step_unchecked(p, &cur)
        } else {
            lyness_inverse(p, &cur)?
        };
    }
    Ok(cur)
}

/// A finite piece of an orbit, `states[j]` being the iterate of index
/// `first_index ± j` (sign given by the direction of iteration).
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace<S> {
    pub params: Params<S>,
    pub states: Vec<Vec<S>>,
    /// Iteration index of `states[0]` (always 0 for traces built here).
    pub first_index: i64,
    /// +1 for forward iteration, -1 for backward.
    pub direction: i8,
    /// Filled by [`crate::dynamics::orbit_signature`]; empty otherwise.
    pub signatures: Vec<LevelSignature<S>>,
    /// Set when iteration stopped early (overflow or leaving the orthant).
    pub truncated: bool,
}

impl<S> OrbitTrace<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Iteration index of `states[j]`.
    pub fn index_of(&self, j: usize) -> i64 {
        self.first_index + self.direction as i64 * j as i64
    }

    pub fn last(&self) -> Option<&Vec<S>> {
        self.states.last()
    }
}

/// Trace of `|n| + 1` states starting at `x`; negative `n` walks backwards.
pub fn iterate<S: Scalar>(p: &Params<S>, x: &[S], n: i64) -> Result<OrbitTrace<S>> {
    p.check_point(x)?;
    let mut states = Vec::with_capacity(n.unsigned_abs() as usize + 1);
    states.push(x.to_vec());
    for _ in 0..n.unsigned_abs() {
        let cur = states.last().expect("trace is never empty");
        let next = if n > 0 {
            step_unchecked(p, cur)
        } else {
            lyness_inverse(p, cur)?
        };
        states.push(next);
    }
    Ok(OrbitTrace {
        params: p.clone(),
        states,
        first_index: 0,
        direction: if n < 0 { -1 } else { 1 },
        signatures: Vec::new(),
        truncated: false,
    })
}

/// Last row of `DF(x)`: `(-(a + x2 + ... + xk)/x1², 1/x1, ..., 1/x1)`.
pub fn jacobian_last_row<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<Vec<S>> {
    p.check_point(x)?;
    let x1 = x[0].clone();
    let mut row = Vec::with_capacity(p.k);
    row.push(-shifted_numerator(p, x) / (x1.clone() * x1.clone()));
    row.extend((1..p.k).map(|_| S::one() / x1.clone()));
    Ok(row)
}

/// `DF(x)` as an exact `k × k` matrix: a shift block above the gradient of
/// the last component.
pub fn jacobian(p: &Params<Rat>, x: &[Rat]) -> Result<RatMatrix> {
    let last = jacobian_last_row(p, x)?;
    let k = p.k;
    let mut m = RatMatrix::zeros(k, k);
    for i in 0..k - 1 {
        m.set(i, i + 1, Rat::one());
    }
    for (j, v) in last.into_iter().enumerate() {
        m.set(k - 1, j, v);
    }
    Ok(m)
}

/// Determinant of `DF(x)`: `(-1)^k (a + x2 + ... + xk) / x1²`.
///
/// Note: the closed form `(-1)^k (a + x2 + ... + x_{k-1}) / xk²` found in
/// some write-ups does not match the cofactor expansion (at `k = 3, a = 1`,
/// `x = (1,1,1)` it gives -2 instead of -3) and breaks `Z∘F = det(DF)·Z`.
pub fn jacobian_det<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    p.check_point(x)?;
    Ok(det_unchecked(p, x))
}

pub(crate) fn det_unchecked<S: Scalar>(p: &Params<S>, x: &[S]) -> S {
    let v = shifted_numerator(p, x) / (x[0].clone() * x[0].clone());
    if p.k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// The unique fixed point `(c, ..., c)` in the positive orthant, where
/// `c² - (k-1)c - a = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    /// Floating-point coordinate `c`.
    pub coordinate: f64,
    /// Coefficients `[1, -(k-1), -a]` of the defining quadratic in `c`.
    pub quadratic: [Rat; 3],
    /// `c` itself when the discriminant is the square of a rational.
    pub exact: Option<Rat>,
    pub k: usize,
}

impl FixedPoint {
    pub fn point(&self) -> Vec<f64> {
        vec![self.coordinate; self.k]
    }

    pub fn exact_point(&self) -> Option<Vec<Rat>> {
        self.exact.as_ref().map(|c| vec![c.clone(); self.k])
    }
}

pub fn fixed_point(p: &Params<Rat>) -> FixedPoint {
    let km1 = Rat::from_integer(BigInt::from(p.k as i64 - 1));
    let disc = &km1 * &km1 + Rat::from_integer(4.into()) * &p.a;
    let exact = rational_sqrt(&disc).map(|s| (&km1 + s) / Rat::from_integer(2.into()));
    let kf = (p.k - 1) as f64;
    let coordinate = (kf + (kf * kf + 4.0 * p.a.to_f64()).sqrt()) / 2.0;
    FixedPoint {
        coordinate: exact.as_ref().map_or(coordinate, Scalar::to_f64),
        quadratic: [Rat::one(), -km1, -p.a.clone()],
        exact,
        k: p.k,
    }
}

/// Fixed-point coordinate for floating parameters.
pub fn fixed_coordinate(k: usize, a: f64) -> f64 {
    let kf = (k - 1) as f64;
    (kf + (kf * kf + 4.0 * a).sqrt()) / 2.0
}

/// Square root of a non-negative rational when it is itself rational.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

/// A point of the curve `L` of 2-periodic points.
///
/// - `k = 3`: `(x, (x+a)/(x-1), x)` for `x > 1`;
/// - `k = 5`: `(x, y, x, y, x)` with `y = (2x+a)/(x-2)` for `x > 2`.
pub fn two_periodic_point<S: Scalar>(p: &Params<S>, x: S) -> Result<Vec<S>> {
    match p.k {
        3 => {
            let shifted = x.clone() - S::one();
            if shifted.sign() <= 0 {
                return Err(Error::domain(format!("curve L (k=3) needs x > 1, got {x:?}")));
            }
            let y = (x.clone() + p.a.clone()) / shifted;
            Ok(vec![x.clone(), y, x])
        }
        5 => {
            let two = S::from_i64(2);
            let shifted = x.clone() - two.clone();
            if shifted.sign() <= 0 {
                return Err(Error::domain(format!("curve L (k=5) needs x > 2, got {x:?}")));
            }
            let y = (two * x.clone() + p.a.clone()) / shifted;
            Ok(vec![x.clone(), y.clone(), x.clone(), y, x])
        }
        k => Err(Error::UnsupportedDimension {
            k,
            what: "2-periodic curves are only provided for k in {3, 5}",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{ints, random_point, seeded_rng};
    use num_traits::Zero;

    fn p(k: usize, a: i64) -> Params<Rat> {
        Params::from_i64(k, a).unwrap()
    }

    #[test]
    fn forward_steps() {
        assert_eq!(lyness_step(&p(3, 1), &ints(&[1, 1, 1])).unwrap(), ints(&[1, 1, 3]));
        assert_eq!(lyness_step(&p(3, 1), &ints(&[1, 1, 3])).unwrap(), ints(&[1, 3, 5]));
        assert_eq!(
            lyness_step(&p(5, 1), &ints(&[1, 2, 3, 4, 5])).unwrap(),
            ints(&[2, 3, 4, 5, 15])
        );
    }

    #[test]
    fn inverse_steps() {
        assert_eq!(lyness_inverse(&p(3, 1), &ints(&[1, 1, 3])).unwrap(), ints(&[1, 1, 1]));
        assert_eq!(lyness_inverse(&p(3, 1), &ints(&[1, 3, 5])).unwrap(), ints(&[1, 1, 3]));
        assert_eq!(
            lyness_inverse(&p(5, 1), &ints(&[2, 3, 4, 5, 15])).unwrap(),
            ints(&[1, 2, 3, 4, 5])
        );
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(lyness_step(&p(3, 1), &ints(&[1, 0, 1])), Err(Error::Domain(_))));
        assert!(matches!(lyness_inverse(&p(3, 1), &ints(&[1, -1, 1])), Err(Error::Domain(_))));
        assert!(matches!(
            lyness_step(&p(3, 1), &ints(&[1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Params::from_i64(1, 1).is_err());
        assert!(Params::from_i64(3, -1).is_err());
        assert!(matches!(jacobian(&p(3, 1), &ints(&[0, 1, 1])), Err(Error::Domain(_))));
        assert!(lyness_step(&Params::new(3, 1.0).unwrap(), &[1.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn iterate_both_directions() {
        let t = iterate(&p(3, 1), &ints(&[1, 1, 1]), 2).unwrap();
        assert_eq!(t.states, vec![ints(&[1, 1, 1]), ints(&[1, 1, 3]), ints(&[1, 3, 5])]);
        assert_eq!(iterate(&p(3, 1), &ints(&[1, 1, 1]), 0).unwrap().len(), 1);
        let back = iterate(&p(3, 1), &ints(&[1, 1, 3]), -1).unwrap();
        assert_eq!(back.last().unwrap(), &ints(&[1, 1, 1]));
        assert_eq!(back.index_of(1), -1);
    }

    #[test]
    fn jacobian_structure() {
        let j = jacobian(&p(3, 1), &ints(&[1, 1, 1])).unwrap();
        let want = RatMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[-3, 1, 1]]).unwrap();
        assert_eq!(j, want);
        let j = jacobian(&p(3, 1), &ints(&[1, 1, 3])).unwrap();
        assert_eq!(j.row(2), &ints(&[-5, 1, 1])[..]);
    }

    #[test]
    fn determinant_values_and_sign() {
        assert_eq!(jacobian_det(&p(3, 1), &ints(&[1, 1, 1])).unwrap(), ints(&[-3])[0]);
        assert_eq!(jacobian_det(&p(5, 1), &ints(&[1, 2, 3, 4, 5])).unwrap(), ints(&[-15])[0]);
        assert!(jacobian_det(&p(4, 1), &ints(&[3, 1, 4, 1])).unwrap().is_positive());
    }

    #[test]
    fn determinant_matches_elimination() {
        let mut rng = seeded_rng(7, 0);
        for k in 3..=8 {
            for _ in 0..100 {
                let x = random_point(&mut rng, k);
                let params = Params::new(k, Rat::new(7.into(), 3.into())).unwrap();
                let closed = jacobian_det(&params, &x).unwrap();
                assert_eq!(jacobian(&params, &x).unwrap().determinant(), Some(closed));
            }
        }
    }

    #[test]
    fn fixed_points() {
        let fp = fixed_point(&p(3, 0));
        assert_eq!(fp.exact, Some(ints(&[2])[0].clone()));
        let fp = fixed_point(&p(3, 1));
        assert!(fp.exact.is_none());
        assert!((fp.coordinate - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        for a in [0.0, 1.0, 4.0, 10.0] {
            let fp = fixed_point(&Params::new(5, crate::scalar::rat_from_f64(a).unwrap()).unwrap());
            assert!((fp.coordinate - (2.0 + (4.0 + a).sqrt())).abs() < 1e-14);
            let x = fp.point();
            let y = lyness_step(&Params::new(5, a).unwrap(), &x).unwrap();
            let res = x.iter().zip(&y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            assert!(res <= 1e-12);
        }
        assert_eq!(fixed_point(&p(4, 4)).exact_point(), Some(ints(&[4, 4, 4, 4])));
    }

    #[test]
    fn two_periodic_curves() {
        let q = two_periodic_point(&p(3, 1), ints(&[2])[0].clone()).unwrap();
        assert_eq!(q, ints(&[2, 3, 2]));
        assert_eq!(lyness_step(&p(3, 1), &q).unwrap(), ints(&[3, 2, 3]));
        assert_eq!(lyness_power(&p(3, 1), &q, 2).unwrap(), q);

        let q = two_periodic_point(&p(5, 1), ints(&[3])[0].clone()).unwrap();
        assert_eq!(q, ints(&[3, 7, 3, 7, 3]));
        assert_eq!(lyness_power(&p(5, 1), &q, 2).unwrap(), q);

        // k = 3, a = 0 has the rational fixed point c = 2, which lies on L.
        let q = two_periodic_point(&p(3, 0), ints(&[2])[0].clone()).unwrap();
        assert_eq!(q, ints(&[2, 2, 2]));

        assert!(matches!(
            two_periodic_point(&p(4, 1), ints(&[3])[0].clone()),
            Err(Error::UnsupportedDimension { .. })
        ));
        assert!(two_periodic_point(&p(3, 1), ints(&[1])[0].clone()).is_err());
        assert!(two_periodic_point(&p(5, 1), ints(&[2])[0].clone()).is_err());
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&Rat::new(9.into(), 4.into())), Some(Rat::new(3.into(), 2.into())));
        assert_eq!(rational_sqrt(&Rat::from_integer(2.into())), None);
        assert_eq!(rational_sqrt(&Rat::from_integer((-4).into())), None);
        assert_eq!(rational_sqrt(&Rat::zero()), Some(Rat::zero()));
    }
}
