//! Orbit-level dynamics: level signatures along orbits, the invariant set
//! `G = {Z = 0}`, odd-period exclusion, the `v1` profile along the curve `L`
//! for `k = 5`, and rotation numbers of `F∘F` for `k = 3`.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::invariants::{eval_pi, eval_v1, eval_v2, eval_v3, eval_z, level_signature};
use crate::map::{det_unchecked, fixed_coordinate, lyness_power, rational_sqrt, step_unchecked, sum, Params};
use crate::map::OrbitTrace;
use crate::scalar::{rat_from_f64, Rat, Scalar};

/// Upper end of the search interval for roots of `Z` in one coordinate.
pub const ROOT_SEARCH_MAX: f64 = 1e6;
/// Accepted `|Z|` at a floating-point root.
pub const G_RESIDUAL_TOL: f64 = 1e-12;

/// Iterates `n` steps recording the level signature of every state.
///
/// Iteration stops early, with `truncated` set, when a state stops being a
/// finite point of the positive orthant (`f64` overflow or underflow).
pub fn orbit_signature<S: Scalar>(p: &Params<S>, x0: &[S], n: usize) -> Result<OrbitTrace<S>> {
    p.check_point(x0)?;
    let mut states = Vec::with_capacity(n + 1);
    let mut signatures = Vec::with_capacity(n + 1);
    signatures.push(level_signature(p, x0)?);
    states.push(x0.to_vec());
    let mut truncated = false;
    for _ in 0..n {
        let next = step_unchecked(p, states.last().expect("nonempty"));
        if p.check_point(&next).is_err() {
            truncated = true;
            break;
        }
        signatures.push(level_signature(p, &next)?);
        states.push(next);
    }
    Ok(OrbitTrace {
        params: p.clone(),
        states,
        first_index: 0,
        direction: 1,
        signatures,
        truncated,
    })
}

/// Summary statistics of a floating-point orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitStats {
    /// Largest relative deviation of `V1`, `V2`, `V3` from their initial values.
    pub v1_drift: f64,
    pub v2_drift: f64,
    pub v3_drift: Option<f64>,
    /// `Some(true)` when `sign(Z)` strictly alternates in `{-1, +1}`
    /// along the whole trace (odd `k` only).
    pub sign_alternates: Option<bool>,
    pub max_coordinate: f64,
    pub min_coordinate: f64,
    /// A priori bound on every coordinate of the orbit: `xj < V1(x0)`.
    pub coordinate_bound: f64,
}

pub fn orbit_stats(trace: &OrbitTrace<f64>) -> OrbitStats {
    let sigs = &trace.signatures;
    let rel = |f: &dyn Fn(usize) -> f64| {
        let v0 = f(0);
        (0..sigs.len()).map(|i| ((f(i) - v0) / v0).abs()).fold(0.0, f64::max)
    };
    let v1_drift = rel(&|i| sigs[i].v1);
    let v2_drift = rel(&|i| sigs[i].v2);
    let v3_drift = sigs
        .first()
        .and_then(|s| s.v3)
        .map(|_| rel(&|i| sigs[i].v3.unwrap_or(f64::NAN)));
    let sign_alternates = sigs.first().and_then(|s| s.z_sign).map(|_| {
        sigs.windows(2).all(|w| {
            let (a, b) = (w[0].z_sign.unwrap_or(0), w[1].z_sign.unwrap_or(0));
            a != 0 && b == -a
        })
    });
    let coords = trace.states.iter().flatten().copied();
    OrbitStats {
        v1_drift,
        v2_drift,
        v3_drift,
        sign_alternates,
        max_coordinate: coords.clone().fold(f64::NEG_INFINITY, f64::max),
        min_coordinate: coords.fold(f64::INFINITY, f64::min),
        coordinate_bound: sigs.first().map_or(f64::NAN, |s| s.v1),
    }
}

/// A point of `G = {Z = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GPoint {
    pub point: Vec<f64>,
    /// Exact coordinates when the root is rational.
    pub exact: Option<Vec<Rat>>,
    /// `|Z(point)|`; exactly 0 for exact points.
    pub residual: f64,
    /// `|Z(F(point))|`, the invariance check.
    pub image_residual: f64,
}

/// Exact coefficients `c0 + c1 t + c2 t² + c3 t³` of `Z` as a polynomial in
/// coordinate `solve_for` (1-based), the other coordinates fixed.
pub fn z_polynomial(p: &Params<Rat>, free: &[Rat], solve_for: usize) -> Result<Vec<Rat>> {
    let k = p.k;
    if solve_for == 0 || solve_for > k {
        return Err(Error::IndexOutOfRange { index: solve_for, max: k });
    }
    if free.len() != k - 1 {
        return Err(Error::DimensionMismatch {
            expected: k - 1,
            got: free.len(),
        });
    }
    // Z has degree <= 3 in any single coordinate: sample at t = 0..3 and
    // convert from Newton's divided differences to monomials.
    let samples = (0..4)
        .map(|t| eval_z(p, &insert(free, solve_for, Rat::from_integer(t.into()))))
        .collect::<Result<Vec<Rat>>>()?;
    let mut dd = samples;
    for level in 1..4 {
        for i in (level..4).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / Rat::from_integer((level as i64).into());
        }
    }
    // Newton basis: 1, t, t(t-1), t(t-1)(t-2).
    let [d0, d1, d2, d3] = [&dd[0], &dd[1], &dd[2], &dd[3]];
    let two = Rat::from_integer(2.into());
    let three = Rat::from_integer(3.into());
    Ok(vec![
        d0.clone(),
        d1 - d2 + &two * d3,
        d2 - &three * d3,
        d3.clone(),
    ])
}

fn insert<T: Clone>(free: &[T], at: usize, value: T) -> Vec<T> {
    let mut v = free.to_vec();
    v.insert(at - 1, value);
    v
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
}

/// Bisection on `[lo, hi]` with `f(lo)` and `f(hi)` of opposite signs, run
/// until the bracket stops shrinking in `f64`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NotFound(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(if flo.abs() <= f(hi).abs() { lo } else { hi })
}

/// Smallest root of `f` in `(0, max]`, bracketed on a log-spaced grid.
pub fn smallest_positive_root(f: impl Fn(f64) -> f64, max: f64) -> Result<f64> {
    let grid: Vec<f64> = (0..=1200).map(|i| 1e-6 * (max / 1e-6).powf(i as f64 / 1200.0)).collect();
    let mut prev = (grid[0], f(grid[0]));
    if prev.1 == 0.0 {
        return Ok(prev.0);
    }
    for &t in &grid[1..] {
        let ft = f(t);
        if ft == 0.0 || ft.signum() != prev.1.signum() {
            return bisect(&f, prev.0, t);
        }
        prev = (t, ft);
    }
    Err(Error::NotFound(format!("no positive root in (0, {max:e}]")))
}

/// Best rational approximation with denominator at most `max_den`.
fn rational_approximation(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| Rat::new((h1 as i64).into(), (k1 as i64).into()))
}

/// Exact positive rational roots of a polynomial of degree <= 3 with
/// rational coefficients, in increasing order, limited to `(0, max]`.
fn exact_positive_roots(c: &[Rat], float_root: Option<f64>, max: &Rat) -> Vec<Rat> {
    let deg = c.iter().rposition(|v| !v.is_zero());
    let eval = |t: &Rat| c.iter().rev().fold(Rat::zero(), |acc, ci| acc * t + ci);
    let mut roots = match deg {
        Some(1) => vec![-&c[0] / &c[1]],
        Some(2) => {
            let disc = &c[1] * &c[1] - Rat::from_integer(4.into()) * &c[2] * &c[0];
            match rational_sqrt(&disc) {
                Some(s) => {
                    let den = Rat::from_integer(2.into()) * &c[2];
                    vec![(-&c[1] - &s) / &den, (-&c[1] + s) / den]
                }
                None => vec![],
            }
        }
        _ => float_root
            .and_then(|r| rational_approximation(r, 1_000_000))
            .filter(|r| eval(r).is_zero())
            .into_iter()
            .collect(),
    };
    roots.retain(|r| r.is_positive() && r <= max);
    roots.sort();
    roots.dedup();
    roots
}

/// Solves `Z = 0` for coordinate `solve_for` (1-based), the remaining
/// coordinates given in order by `free`.
///
/// The smallest root in `(0, 1e6]` is returned. It is exact when rational
/// (linear and quadratic cases are solved in closed form, cubic roots are
/// recognised from their float value); otherwise a bisection root with
/// `|Z| <= 1e-12`.
pub fn sample_g_point(p: &Params<Rat>, free: &[Rat], solve_for: usize) -> Result<GPoint> {
    if p.k % 2 == 0 {
        return Err(Error::UnsupportedDimension {
            k: p.k,
            what: "G is defined only for odd k",
        });
    }
    if free.iter().any(|v| !v.is_positive()) {
        return Err(Error::domain("fixed coordinates must be positive"));
    }
    let coeffs = z_polynomial(p, free, solve_for)?;
    let fc: Vec<f64> = coeffs.iter().map(Scalar::to_f64).collect();
    let float_root = smallest_positive_root(|t| horner(&fc, t), ROOT_SEARCH_MAX);
    let max = rat_from_f64(ROOT_SEARCH_MAX)?;
    let exact_roots = exact_positive_roots(&coeffs, float_root.as_ref().ok().copied(), &max);

    let pf = p.to_f64();
    if let Some(root) = exact_roots.first() {
        let point = insert(free, solve_for, root.clone());
        debug_assert!(eval_z(p, &point)?.is_zero());
        let image = step_unchecked(p, &point);
        let image_residual = eval_z(p, &image)?.to_f64().abs();
        let fpoint: Vec<f64> = point.iter().map(Scalar::to_f64).collect();
        return Ok(GPoint {
            point: fpoint,
            exact: Some(point),
            residual: 0.0,
            image_residual,
        });
    }
    let root = float_root?;
    let free_f: Vec<f64> = free.iter().map(Scalar::to_f64).collect();
    let point = insert(&free_f, solve_for, root);
    finish_float_g_point(&pf, point)
}

/// Solves `Z(curve(t)) = 0` for `t` in `[lo, hi]`, for configurations where
/// several coordinates move together.
pub fn sample_g_point_along(
    p: &Params<f64>,
    curve: impl Fn(f64) -> Vec<f64>,
    lo: f64,
    hi: f64,
) -> Result<GPoint> {
    let z = |t: f64| eval_z(p, &curve(t)).unwrap_or(f64::NAN);
    let t = bisect(z, lo, hi)?;
    finish_float_g_point(p, curve(t))
}

fn finish_float_g_point(p: &Params<f64>, point: Vec<f64>) -> Result<GPoint> {
    p.check_point(&point)?;
    let residual = eval_z(p, &point)?.abs();
    if residual > G_RESIDUAL_TOL {
        return Err(Error::NotFound(format!("refined root leaves |Z| = {residual:e}")));
    }
    let image_residual = eval_z(p, &step_unchecked(p, &point))?.abs();
    Ok(GPoint {
        point,
        exact: None,
        residual,
        image_residual,
    })
}

/// The parameter `a` for which `x` lies on `G`, i.e. the root of `Z` viewed
/// as a linear function of `a`; `None` if it would be negative.
pub fn g_parameter(x: &[Rat]) -> Option<Rat> {
    if x.len() % 2 == 0 {
        return None;
    }
    let pronic = |v: &Rat| v * (v + Rat::from_integer(1.into()));
    let odd = x.iter().step_by(2).map(pronic).fold(Rat::from_integer(1.into()), |a, b| a * b);
    let even = x.iter().skip(1).step_by(2).map(pronic).fold(Rat::from_integer(1.into()), |a, b| a * b);
    let a = odd / even - sum(x);
    (!a.is_negative()).then_some(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OddPeriodVerdict {
    /// `Z(x) != 0`: `sign(Z)` flips at every step, so no odd period exists.
    Excluded { z_sign: i8 },
    /// `Z(x) = 0` and the minimal period, found by iteration, is odd.
    OddPeriod { period: usize },
    /// `Z(x) = 0` and the minimal period is even (hence no odd period).
    EvenPeriod { period: usize },
    /// `Z(x) = 0` and no period up to the search limit.
    NotFound { searched_up_to: usize },
}

/// Decides whether `x` can have odd period. Off `G` the answer follows
/// from `sign(Z)` alone, without iterating.
pub fn odd_period_guard(p: &Params<Rat>, x: &[Rat], max_odd_period: usize) -> Result<OddPeriodVerdict> {
    p.check_point(x)?;
    let z = eval_z(p, x)?;
    if !z.is_zero() {
        return Ok(OddPeriodVerdict::Excluded { z_sign: z.sign() });
    }
    let mut cur = x.to_vec();
    for period in 1..=max_odd_period {
        cur = step_unchecked(p, &cur);
        if cur == x {
            return Ok(if period % 2 == 1 {
                OddPeriodVerdict::OddPeriod { period }
            } else {
                OddPeriodVerdict::EvenPeriod { period }
            });
        }
    }
    Ok(OddPeriodVerdict::NotFound {
        searched_up_to: max_odd_period,
    })
}

/// `(Π(F²x) - det(DF²x)·Π(x), Z(F²x) - det(DF²x)·Z(x))`; both vanish, which
/// makes `1/Π` and `±1/Z` invariant densities for `F∘F`.
pub fn measure_density_residual<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<(S, S)> {
    if p.k % 2 == 0 {
        return Err(Error::UnsupportedDimension {
            k: p.k,
            what: "the density identities are stated for odd k",
        });
    }
    p.check_point(x)?;
    let fx = step_unchecked(p, x);
    let f2x = step_unchecked(p, &fx);
    let det2 = det_unchecked(p, &fx) * det_unchecked(p, x);
    let pi_res = eval_pi(p, &f2x)? - det2.clone() * eval_pi(p, x)?;
    let z_res = eval_z(p, &f2x)? - det2 * eval_z(p, x)?;
    Ok((pi_res, z_res))
}

fn require_k5<S>(p: &Params<S>) -> Result<()> {
    if p.k != 5 {
        return Err(Error::UnsupportedDimension {
            k: p.k,
            what: "the v-profile along L is defined for k = 5",
        });
    }
    Ok(())
}

/// `(V1, V2, V3)` at `(x, y, x, y, x)`, `y = (2x + a)/(x - 2)`, for `x > 2`.
pub fn v_profile<S: Scalar>(p: &Params<S>, x: S) -> Result<(S, S, S)> {
    require_k5(p)?;
    let q = crate::map::two_periodic_point(p, x)?;
    Ok((eval_v1(p, &q)?, eval_v2(p, &q)?, eval_v3(p, &q)?))
}

/// Minimiser of `v1` on `[lo, hi]` by golden-section search.
///
/// Probe points are `f64`, but `v1` is evaluated exactly at each of them, so
/// comparisons stay reliable down to the spacing of `f64` near the minimum.
pub fn locate_v1_minimum(p: &Params<Rat>, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    require_k5(p)?;
    let v1 = |x: f64| -> Result<Rat> { Ok(v_profile(p, rat_from_f64(x)?)?.0) };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (v1(c)?, v1(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            if c <= a || c >= d {
                break;
            }
            fc = v1(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            if d >= b || d <= c {
                break;
            }
            fd = v1(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// The two solutions `x1(h) < 2 + sqrt(4 + a) < x2(h)` of `v1(x) = h`.
pub fn solve_v1_level(p: &Params<f64>, h: f64) -> Result<(f64, f64)> {
    require_k5(p)?;
    let xmin = fixed_coordinate(5, p.a);
    let vmin = v_profile(p, xmin)?.0;
    if !(h > vmin) {
        return Err(Error::NotFound(format!(
            "level h = {h} is not above the minimum v1 = {vmin} of the profile"
        )));
    }
    let g = |x: f64| v_profile(p, x).map(|v| v.0 - h).unwrap_or(f64::INFINITY);

    let mut delta = (xmin - 2.0) / 2.0;
    while g(2.0 + delta) <= 0.0 {
        delta /= 2.0;
        if delta < 1e-300 {
            return Err(Error::NotFound("left branch not bracketed".into()));
        }
    }
    let left = bisect(g, 2.0 + delta, xmin)?;

    let mut right = 2.0 * xmin;
    while g(right) <= 0.0 {
        right *= 2.0;
        if !right.is_finite() {
            return Err(Error::NotFound("right branch not bracketed".into()));
        }
    }
    let right = bisect(g, xmin, right)?;
    Ok((left, right))
}

/// Rotation number of `F∘F` on the invariant curve through `x0` (`k = 3`).
///
/// The `F∘F`-orbit is projected onto the plane through its centroid spanned
/// by its two principal directions; the estimate is the mean signed angular
/// advance per step divided by `2π`, reduced to `[0, 1)`. The plane is
/// oriented by its normal, signed so that its largest-magnitude component is
/// positive, which makes nearby orbits share an orientation.
pub fn rotation_number(p: &Params<f64>, x0: &[f64], n: usize) -> Result<f64> {
    if p.k != 3 {
        return Err(Error::UnsupportedDimension {
            k: p.k,
            what: "rotation numbers are estimated for k = 3",
        });
    }
    p.check_point(x0)?;
    if n == 0 {
        return Err(Error::domain("need at least one step"));
    }
    let mut pts = Vec::with_capacity(n + 1);
    let mut cur = x0.to_vec();
    pts.push(Vector3::new(cur[0], cur[1], cur[2]));
    for _ in 0..n {
        cur = lyness_power(p, &cur, 2)?;
        pts.push(Vector3::new(cur[0], cur[1], cur[2]));
    }
    let centroid = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
    let cov = pts.iter().fold(Matrix3::zeros(), |acc, q| {
        let d = q - centroid;
        acc + d * d.transpose()
    }) / pts.len() as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let scale = eig.eigenvalues[order[0]].abs().max(centroid.norm_squared());
    if eig.eigenvalues[order[1]] <= 1e-18 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Degenerate("orbit does not span a plane".into()));
    }
    let canonical = |v: Vector3<f64>| {
        let big = v.iter().copied().fold(0.0f64, |m, c| if c.abs() > m.abs() { c } else { m });
        if big < 0.0 {
            -v
        } else {
            v
        }
    };
    let column = |i: usize| -> Vector3<f64> { eig.eigenvectors.column(order[i]).into_owned() };
    // The plane normal is well determined even when the two in-plane
    // variances coincide; fixing its sign fixes the orientation.
    let normal = canonical(column(2));
    let e1 = canonical(column(0));
    let e2 = normal.cross(&e1);
    let angles: Vec<f64> = pts
        .iter()
        .map(|q| {
            let d = q - centroid;
            d.dot(&e2).atan2(d.dot(&e1))
        })
        .collect();
    let two_pi = std::f64::consts::TAU;
    let total: f64 = angles
        .windows(2)
        .map(|w| {
            let mut d = (w[1] - w[0]).rem_euclid(two_pi);
            if d > std::f64::consts::PI {
                d -= two_pi;
            }
            d
        })
        .sum();
    Ok((total / (n as f64 * two_pi)).rem_euclid(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::ints;

    fn p(k: usize, a: i64) -> Params<Rat> {
        Params::from_i64(k, a).unwrap()
    }

    #[test]
    fn z_polynomial_in_one_coordinate() {
        // k = 3, a = 1, x = y = 1: Z(z) = 2z² - 6.
        let c = z_polynomial(&p(3, 1), &ints(&[1, 1]), 3).unwrap();
        assert_eq!(c, ints(&[-6, 0, 2, 0]));
        assert!(z_polynomial(&p(3, 1), &ints(&[1, 1]), 4).is_err());
        assert!(z_polynomial(&p(3, 1), &ints(&[1]), 3).is_err());
    }

    #[test]
    fn g_point_with_irrational_root() {
        let g = sample_g_point(&p(3, 1), &ints(&[1, 1]), 3).unwrap();
        assert!(g.exact.is_none());
        assert!((g.point[2] - 3f64.sqrt()).abs() < 1e-14);
        assert!(g.residual <= 1e-12 && g.image_residual <= 1e-12);
    }

    #[test]
    fn g_point_with_rational_root() {
        // k = 3, a = 0, x = 2, y = 2: Z(z) = 6z(z+1) - (4+z)·6 = 6z² - 24, z = 2.
        let g = sample_g_point(&p(3, 0), &ints(&[2, 2]), 3).unwrap();
        assert_eq!(g.exact, Some(ints(&[2, 2, 2])));
        assert_eq!(g.image_residual, 0.0);
    }

    #[test]
    fn g_point_not_found_beyond_search_range() {
        let tiny = Rat::new(1.into(), 10_000.into());
        let r = sample_g_point(&p(3, 1), &[tiny, Rat::from_integer(50.into())], 3);
        assert!(matches!(r, Err(Error::NotFound(_))));
    }

    #[test]
    fn g_parameter_puts_points_on_g() {
        let x = ints(&[5, 1, 6, 1, 4]);
        let a = g_parameter(&x).unwrap();
        assert!(eval_z(&Params::new(5, a).unwrap(), &x).unwrap().is_zero());
        assert_eq!(g_parameter(&ints(&[1, 5, 1])), None);
    }

    #[test]
    fn odd_period_verdicts() {
        assert_eq!(
            odd_period_guard(&p(3, 1), &ints(&[1, 1, 1]), 9).unwrap(),
            OddPeriodVerdict::Excluded { z_sign: -1 }
        );
        assert_eq!(
            odd_period_guard(&p(3, 1), &ints(&[2, 3, 2]), 9).unwrap(),
            OddPeriodVerdict::Excluded { z_sign: -1 }
        );
        assert_eq!(
            odd_period_guard(&p(3, 0), &ints(&[2, 2, 2]), 9).unwrap(),
            OddPeriodVerdict::OddPeriod { period: 1 }
        );
    }

    #[test]
    fn density_residuals_golden() {
        let (a, b) = measure_density_residual(&p(3, 1), &ints(&[1, 1, 1])).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = measure_density_residual(&p(5, 1), &ints(&[1, 2, 3, 4, 5])).unwrap();
        assert!(a.is_zero() && b.is_zero());
        assert!(measure_density_residual(&p(4, 1), &ints(&[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn v_profile_at_three() {
        let (v1, _, _) = v_profile(&p(5, 1), Rat::from_integer(3.into())).unwrap();
        assert_eq!(v1, Rat::new((24 * 4096).into(), (3 * 7 * 3 * 7 * 3).into()));
        assert!(v_profile(&p(5, 1), Rat::from_integer(2.into())).is_err());
        assert!(v_profile(&p(3, 1), Rat::from_integer(3.into())).is_err());
    }

    #[test]
    fn v1_level_below_minimum_fails() {
        let pf = Params::new(5, 1.0).unwrap();
        let vmin = v_profile(&pf, 2.0 + 5f64.sqrt()).unwrap().0;
        assert!(solve_v1_level(&pf, vmin).is_err());
        assert!(solve_v1_level(&pf, vmin * 0.5).is_err());
    }

    #[test]
    fn rotation_number_degenerate_at_fixed_point() {
        let pf = Params::new(3, 0.0).unwrap();
        assert!(matches!(
            rotation_number(&pf, &[2.0, 2.0, 2.0], 100),
            Err(Error::Degenerate(_))
        ));
        assert!(rotation_number(&Params::new(4, 0.0).unwrap(), &[1.0; 4], 10).is_err());
    }

    #[test]
    fn orbit_signature_exact_is_constant() {
        let t = orbit_signature(&p(3, 1), &ints(&[1, 1, 3]), 10).unwrap();
        assert_eq!(t.len(), 11);
        assert!(t.signatures.iter().all(|s| s.v1 == Rat::from_integer(32.into())));
        assert!(t.signatures.windows(2).all(|w| w[0].z_sign == w[1].z_sign.map(|s| -s)));
    }

    #[test]
    fn rational_approximations() {
        assert_eq!(rational_approximation(0.75, 100), Some(Rat::new(3.into(), 4.into())));
        assert_eq!(rational_approximation(2.0, 100), Some(Rat::from_integer(2.into())));
    }
}
