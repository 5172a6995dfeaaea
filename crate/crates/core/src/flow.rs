//! Numerical integration of `dx/dt = X_k(x)` in `f64`.
//!
//! Conservation of the first integrals is monitored, never enforced: the
//! relative drift of each invariant along the trace is reported as a
//! statistic of integrator accuracy. The field has poles on the boundary of
//! the positive orthant, so a trace is truncated (and flagged) as soon as a
//! coordinate drops to [`BOUNDARY_EPS`] or below.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::invariants::{eval_invariant, level_signature, Invariant, LevelSignature};
use crate::map::{step_unchecked, Params};
use crate::symmetry::SymmetryField;

pub const BOUNDARY_EPS: f64 = 1e-12;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Dormand-Prince 5(4) with step-size control, sampled every `dt`.
    Rk45,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4-fixed",
            Method::Rk45 => "rk45-adaptive",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" | "rk4-fixed" => Ok(Method::Rk4),
            "rk45" | "rk45-adaptive" => Ok(Method::Rk45),
            _ => Err(Error::domain(format!("unknown integration method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub params: Params<f64>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub signatures: Vec<LevelSignature<f64>>,
    pub method: Method,
    pub dt: f64,
    pub tolerance: f64,
    /// The trajectory approached the boundary of the orthant and was cut.
    pub truncated: bool,
    /// Largest relative drift `|V(t) - V(0)| / |V(0)|` per tracked invariant.
    pub drift: Vec<(Invariant, f64)>,
}

impl FlowTrace {
    pub fn drift_of(&self, which: Invariant) -> Option<f64> {
        self.drift.iter().find(|(w, _)| *w == which).map(|(_, d)| *d)
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("a flow trace holds at least the initial state")
    }
}

/// Invariants whose drift is reported for dimension `k`.
pub fn tracked_invariants(k: usize) -> Vec<Invariant> {
    if k % 2 == 1 {
        Invariant::ALL.to_vec()
    } else {
        vec![Invariant::V1, Invariant::V2]
    }
}

struct Field {
    field: SymmetryField<f64>,
    sign: f64,
}

impl Field {
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut v = self.field.eval_unchecked(x);
        if self.sign < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        v
    }
}

fn axpy(x: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = x.to_vec();
    for (c, v) in terms {
        for (o, vi) in out.iter_mut().zip(v.iter()) {
            *o += h * c * vi;
        }
    }
    out
}

fn rk4_step(f: &Field, x: &[f64], h: f64) -> Vec<f64> {
    let k1 = f.eval(x);
    let k2 = f.eval(&axpy(x, h, &[(0.5, &k1)]));
    let k3 = f.eval(&axpy(x, h, &[(0.5, &k2)]));
    let k4 = f.eval(&axpy(x, h, &[(1.0, &k3)]));
    axpy(x, h, &[(1.0 / 6.0, &k1), (2.0 / 6.0, &k2), (2.0 / 6.0, &k3), (1.0 / 6.0, &k4)])
}

/// One Dormand-Prince step: returns the fifth-order solution and the
/// embedded error estimate.
fn dopri_step(f: &Field, x: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let k1 = f.eval(x);
    let k2 = f.eval(&axpy(x, h, &[(1.0 / 5.0, &k1)]));
    let k3 = f.eval(&axpy(x, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]));
    let k4 = f.eval(&axpy(x, h, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]));
    let k5 = f.eval(&axpy(
        x,
        h,
        &[
            (19372.0 / 6561.0, &k1),
            (-25360.0 / 2187.0, &k2),
            (64448.0 / 6561.0, &k3),
            (-212.0 / 729.0, &k4),
        ],
    ));
    let k6 = f.eval(&axpy(
        x,
        h,
        &[
            (9017.0 / 3168.0, &k1),
            (-355.0 / 33.0, &k2),
            (46732.0 / 5247.0, &k3),
            (49.0 / 176.0, &k4),
            (-5103.0 / 18656.0, &k5),
        ],
    ));
    let y5 = axpy(
        x,
        h,
        &[
            (35.0 / 384.0, &k1),
            (500.0 / 1113.0, &k3),
            (125.0 / 192.0, &k4),
            (-2187.0 / 6784.0, &k5),
            (11.0 / 84.0, &k6),
        ],
    );
    let k7 = f.eval(&y5);
    let e = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let err = (0..x.len())
        .map(|i| h * ks.iter().zip(e).map(|(k, c)| c * k[i]).sum::<f64>())
        .collect();
    (y5, err)
}

fn outside(x: &[f64]) -> bool {
    x.iter().any(|&v| !v.is_finite() || v <= BOUNDARY_EPS)
}

/// Advances from `x` over an interval of length `span` with adaptive steps.
fn dopri_interval(f: &Field, x: &[f64], t: f64, span: f64, tol: f64, h: &mut f64) -> Result<Vec<f64>> {
    let mut cur = x.to_vec();
    let mut done = 0.0;
    while done < span {
        let step = h.min(span - done);
        if step <= 1e-14 * (1.0 + t.abs() + done) {
            return Err(Error::StepUnderflow { t: t + done });
        }
        let (next, err) = dopri_step(f, &cur, step);
        let ratio = err
            .iter()
            .zip(cur.iter().zip(&next))
            .map(|(e, (a, b))| e.abs() / (tol * (1.0 + a.abs().max(b.abs()))))
            .fold(0.0, f64::max);
        if ratio <= 1.0 && !outside(&next) {
            cur = next;
            done += step;
            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            *h = step * grow;
        } else if outside(&next) && ratio <= 1.0 {
            // An accepted step that leaves the orthant ends the trace.
            return Ok(next);
        } else {
            *h = step * (0.9 * ratio.powf(-0.25)).clamp(0.1, 0.9);
        }
    }
    Ok(cur)
}

/// Raw sampled path of the (possibly time-reversed) field; returns the
/// states and whether the path was truncated at the boundary.
fn sample_path(
    p: &Params<f64>,
    x0: &[f64],
    dt: f64,
    t_max: f64,
    method: Method,
    tol: f64,
    sign: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, bool)> {
    let f = Field {
        field: SymmetryField::new(p.clone())?,
        sign,
    };
    let steps = (t_max / dt).round().max(1.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());
    let mut h = dt;
    for i in 1..=steps {
        let prev = states.last().expect("nonempty");
        let next = match method {
            Method::Rk4 => rk4_step(&f, prev, dt),
            Method::Rk45 => dopri_interval(&f, prev, (i - 1) as f64 * dt, dt, tol, &mut h)?,
        };
        if outside(&next) {
            return Ok((times, states, true));
        }
        times.push(i as f64 * dt);
        states.push(next);
    }
    Ok((times, states, false))
}

/// Integrates the symmetry flow from `x0` up to `t_max`, sampling every `dt`.
pub fn integrate_flow(p: &Params<f64>, x0: &[f64], dt: f64, t_max: f64, method: Method) -> Result<FlowTrace> {
    integrate_flow_with_tolerance(p, x0, dt, t_max, method, DEFAULT_TOLERANCE)
}

pub fn integrate_flow_with_tolerance(
    p: &Params<f64>,
    x0: &[f64],
    dt: f64,
    t_max: f64,
    method: Method,
    tolerance: f64,
) -> Result<FlowTrace> {
    SymmetryField::new(p.clone())?;
    p.check_point(x0)?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::domain("dt and t_max must be positive and finite"));
    }
    let (times, states, truncated) = sample_path(p, x0, dt, t_max, method, tolerance, 1.0)?;
    let signatures = states
        .iter()
        .map(|x| level_signature(p, x))
        .collect::<Result<Vec<_>>>()?;
    let drift = tracked_invariants(p.k)
        .into_iter()
        .map(|w| {
            let v0 = eval_invariant(p, w, x0)?;
            let worst = states
                .iter()
                .map(|x| eval_invariant(p, w, x).map(|v| ((v - v0) / v0).abs()))
                .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
            Ok((w, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowTrace {
        params: p.clone(),
        times,
        states,
        signatures,
        method,
        dt,
        tolerance,
        truncated,
        drift,
    })
}

/// Whether the map sends flow orbits onto flow orbits, measured on samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportReport {
    /// For each sampled `q` on the orbit through `x0`, the distance from
    /// `F(q)` to the nearest sample of the orbit through `F(x0)`.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub mean_distance: f64,
    /// Largest distance from the centroid of the orbit through `x0`.
    pub curve_scale: f64,
    pub warnings: Vec<String>,
}

/// Exploratory diagnostic: integrates the flow orbit `γ0` through `x0` on
/// `[0, t_max]` and the orbit `γ1` through `F(x0)` on `[-t_max, t_max]`, and
/// measures how far `F(γ0)` lies from `γ1`. Nothing is asserted.
pub fn transport_diagnostic(p: &Params<f64>, x0: &[f64], t_max: f64, samples: usize) -> Result<TransportReport> {
    SymmetryField::new(p.clone())?;
    p.check_point(x0)?;
    if samples == 0 || !(t_max > 0.0) {
        return Err(Error::domain("transport diagnostic needs samples > 0 and t_max > 0"));
    }
    let dt = (t_max / 20_000.0).min(1e-3);
    let mut warnings = Vec::new();
    let (_, gamma0, cut0) = sample_path(p, x0, dt, t_max, Method::Rk4, DEFAULT_TOLERANCE, 1.0)?;
    let fx0 = step_unchecked(p, x0);
    let (_, fwd, cut1) = sample_path(p, &fx0, dt, t_max, Method::Rk4, DEFAULT_TOLERANCE, 1.0)?;
    let (_, bwd, cut2) = sample_path(p, &fx0, dt, t_max, Method::Rk4, DEFAULT_TOLERANCE, -1.0)?;
    if cut0 {
        warnings.push("orbit through x0 truncated at the boundary".to_string());
    }
    if cut1 || cut2 {
        warnings.push("orbit through F(x0) truncated at the boundary".to_string());
    }
    let gamma1: Vec<&Vec<f64>> = fwd.iter().chain(bwd.iter()).collect();

    let dist = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let stride = (gamma0.len() / samples).max(1);
    let distances: Vec<f64> = gamma0
        .iter()
        .step_by(stride)
        .take(samples)
        .map(|q| {
            let fq = step_unchecked(p, q);
            gamma1.iter().map(|g| dist(&fq, g)).fold(f64::INFINITY, f64::min)
        })
        .collect();

    let k = p.k;
    let centroid: Vec<f64> = (0..k)
        .map(|i| gamma0.iter().map(|s| s[i]).sum::<f64>() / gamma0.len() as f64)
        .collect();
    let curve_scale = gamma0.iter().map(|s| dist(s, &centroid)).fold(0.0, f64::max);
    let max_distance = distances.iter().cloned().fold(0.0, f64::max);
    let mean_distance = distances.iter().sum::<f64>() / distances.len() as f64;
    Ok(TransportReport {
        distances,
        max_distance,
        mean_distance,
        curve_scale,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Params<f64> {
        Params::new(4, 4.0).unwrap()
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = fig1();
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!(integrate_flow(&p, &x, 0.0, 1.0, Method::Rk4).is_err());
        assert!(integrate_flow(&p, &x, 1e-3, -1.0, Method::Rk4).is_err());
        assert!(integrate_flow(&p, &[1.0, -2.0, 3.0, 4.0], 1e-3, 1.0, Method::Rk4).is_err());
        assert!(integrate_flow(&Params::new(2, 1.0).unwrap(), &[1.0, 1.0], 1e-3, 1.0, Method::Rk4).is_err());
        assert!("euler".parse::<Method>().is_err());
        assert_eq!("rk45-adaptive".parse::<Method>().unwrap(), Method::Rk45);
    }

    #[test]
    fn equilibria_give_constant_traces() {
        let p = fig1();
        let t = integrate_flow(&p, &[4.0; 4], 1e-2, 1.0, Method::Rk4).unwrap();
        assert!(t.states.iter().all(|s| s == &vec![4.0; 4]));
        let p5 = Params::new(5, 1.0).unwrap();
        let on_l = [3.0, 7.0, 3.0, 7.0, 3.0];
        let t = integrate_flow(&p5, &on_l, 1e-2, 1.0, Method::Rk45).unwrap();
        assert!(t.states.iter().all(|s| s == &on_l.to_vec()));
    }

    #[test]
    fn fixed_step_is_deterministic() {
        let p = fig1();
        let a = integrate_flow(&p, &[1.0, 2.0, 3.0, 4.0], 1e-2, 1.0, Method::Rk4).unwrap();
        let b = integrate_flow(&p, &[1.0, 2.0, 3.0, 4.0], 1e-2, 1.0, Method::Rk4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.times.len(), 101);
        assert!(a.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn adaptive_conserves() {
        let p = fig1();
        let t = integrate_flow(&p, &[1.0, 2.0, 3.0, 4.0], 1e-2, 2.0, Method::Rk45).unwrap();
        assert!(!t.truncated);
        assert!(t.drift_of(Invariant::V1).unwrap() < 1e-8);
        assert!(t.drift_of(Invariant::V2).unwrap() < 1e-8);
        assert_eq!(t.drift_of(Invariant::V3), None);
    }

    #[test]
    fn truncates_near_the_boundary() {
        // Time-forward flow from a point close to the boundary.
        let p = Params::new(3, 0.0).unwrap();
        let x = [1e-9, 30.0, 1e-9];
        let t = integrate_flow(&p, &x, 1e-3, 1.0, Method::Rk4).unwrap();
        assert!(t.truncated);
        assert!(t.states.iter().all(|s| s.iter().all(|&v| v > BOUNDARY_EPS)));
    }

    #[test]
    fn transport_at_fixed_point_is_zero() {
        let r = transport_diagnostic(&fig1(), &[4.0; 4], 1.0, 10).unwrap();
        assert!(r.distances.iter().all(|&d| d == 0.0));
    }
}
