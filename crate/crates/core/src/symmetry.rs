//! The rational vector field `X_k` and the identities that make it a Lie
//! symmetry of the Lyness map: `X(F(x)) = DF(x)·X(x)`.
//!
//! With `L_i = 1 + x_i + x_{i+1}` and `R = a + Σx + x1·xk` (1-based):
//!
//! ```text
//! X_1 =  (x1+1) · Π_{i=2}^{k-1} L_i · (a + Σ_{i<k} x_i - x2·xk)     / Π_{i≠1} x_i
//! X_m =  (xm+1) · Π_{i≠m-1,m} L_i  · R · (x_{m-1} - x_{m+1})       / Π_{i≠m} x_i
//! X_k = -(xk+1) · Π_{i=1}^{k-2} L_i · (a + Σ_{i>1} x_i - x1·x_{k-1}) / Π_{i≠k} x_i
//! ```
//!
//! Components are evaluated straight from these expressions, without
//! cancelling common factors; the shift law `X_{i+1} = X_i∘F` is only ever
//! used as a check.

use crate::error::{Error, Result};
use crate::invariants::{eval_invariant, Invariant};
use crate::map::{jacobian_last_row, product, shifted_numerator, step_unchecked, sum, Params};
use crate::scalar::{directional_derivative, Scalar};

/// `X_k` for fixed parameters (`k >= 3`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryField<S> {
    params: Params<S>,
}

impl<S: Scalar> SymmetryField<S> {
    pub fn new(params: Params<S>) -> Result<Self> {
        if params.k < 3 {
            return Err(Error::UnsupportedDimension {
                k: params.k,
                what: "the Lie symmetry X_k is defined for k >= 3",
            });
        }
        Ok(SymmetryField { params })
    }

    pub fn params(&self) -> &Params<S> {
        &self.params
    }

    /// Component `X_m`, `m` 1-based.
    pub fn component(&self, m: usize, x: &[S]) -> Result<S> {
        let k = self.params.k;
        if m == 0 || m > k {
            return Err(Error::IndexOutOfRange { index: m, max: k });
        }
        self.params.check_point(x)?;
        Ok(self.component_unchecked(m, x))
    }

    pub fn eval(&self, x: &[S]) -> Result<Vec<S>> {
        self.params.check_point(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[S]) -> Vec<S> {
        (1..=self.params.k).map(|m| self.component_unchecked(m, x)).collect()
    }

    fn component_unchecked(&self, m: usize, x: &[S]) -> S {
        let k = self.params.k;
        let a = self.params.a.clone();
        // 1-based accessors.
        let xi = |i: usize| x[i - 1].clone();
        let link = |i: usize| S::one() + xi(i) + xi(i + 1);
        let links_except = |skip: &[usize]| product((1..k).filter(|i| !skip.contains(i)).map(link));
        let pi_except = |j: usize| product((1..=k).filter(|&i| i != j).map(xi));

        if m == 1 {
            let tail = a + sum(&x[..k - 1]) - xi(2) * xi(k);
            (xi(1) + S::one()) * links_except(&[1]) * tail / pi_except(1)
        } else if m == k {
            let tail = a + sum(&x[1..]) - xi(1) * xi(k - 1);
            -((xi(k) + S::one()) * links_except(&[k - 1]) * tail / pi_except(k))
        } else {
            let r = a + sum(x) + xi(1) * xi(k);
            (xi(m) + S::one()) * links_except(&[m - 1, m]) * r * (xi(m - 1) - xi(m + 1)) / pi_except(m)
        }
    }
}

pub fn eval_x<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<Vec<S>> {
    SymmetryField::new(p.clone())?.eval(x)
}

/// `X(F(x)) - DF(x)·X(x)`; identically zero for a Lie symmetry.
pub fn lie_residual<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<Vec<S>> {
    let field = SymmetryField::new(p.clone())?;
    let xv = field.eval(x)?;
    let fx = step_unchecked(p, x);
    let xf = field.eval(&fx)?;
    let last_row = jacobian_last_row(p, x)?;
    let k = p.k;
    let mut out = Vec::with_capacity(k);
    for i in 0..k - 1 {
        out.push(xf[i].clone() - xv[i + 1].clone());
    }
    let dfx_last = last_row
        .into_iter()
        .zip(&xv)
        .fold(S::zero(), |acc, (d, v)| acc + d * v.clone());
    out.push(xf[k - 1].clone() - dfx_last);
    Ok(out)
}

/// `X_{i+1}(x) - X_i(F(x))` for `1 <= i <= k-1`.
pub fn shift_residual<S: Scalar>(p: &Params<S>, x: &[S], i: usize) -> Result<S> {
    let field = SymmetryField::new(p.clone())?;
    if i == 0 || i >= p.k {
        return Err(Error::IndexOutOfRange { index: i, max: p.k - 1 });
    }
    let next = field.component(i + 1, x)?;
    let fx = step_unchecked(p, x);
    Ok(next - field.component(i, &fx)?)
}

/// `X_k(F) + ((a + x2 + ... + xk)/x1²)·X_1 - (1/x1)·Σ_{i>=2} X_i`.
pub fn compatibility_residual<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    let field = SymmetryField::new(p.clone())?;
    let xv = field.eval(x)?;
    let fx = step_unchecked(p, x);
    let xk_f = field.component(p.k, &fx)?;
    let x1 = x[0].clone();
    let lead = shifted_numerator(p, x) / (x1.clone() * x1.clone()) * xv[0].clone();
    Ok(xk_f + lead - sum(&xv[1..]) / x1)
}

/// `(k, invariant)` pairs for which `∇V·X = 0` is asserted.
pub fn annihilation_supported(k: usize, which: Invariant) -> bool {
    matches!(
        (k, which),
        (3 | 4 | 5, Invariant::V1 | Invariant::V2) | (5, Invariant::V3)
    )
}

/// `∇V(x)·X(x)`, the derivative of `V` along the field, from one dual pass
/// with tangent `X(x)`.
pub fn annihilation_residual<S: Scalar>(p: &Params<S>, x: &[S], which: Invariant) -> Result<S> {
    if !annihilation_supported(p.k, which) {
        return Err(Error::UnsupportedDimension {
            k: p.k,
            what: "annihilation is asserted for V1, V2 (k = 3, 4, 5) and V3 (k = 5)",
        });
    }
    let tangent = eval_x(p, x)?;
    let dp = p.dual();
    directional_derivative(|y| eval_invariant(&dp, which, y), x, &tangent)
}

/// `C - L2·L3·Q_k` for `k >= 6`, where
/// `C = Σ_{m=2}^{k-1} x_m(x_m+1)(x_{m-1}-x_{m+1}) Π_{i≠m-1,m} L_i` and
/// `Q_k = Π_{i=4}^{k-2} L_i · (x1·x2·L_{k-1} - x_{k-1}·x_k·L_1)`.
pub fn claim_residual<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    let k = p.k;
    if k < 6 {
        return Err(Error::UnsupportedDimension {
            k,
            what: "the factorization of C holds for k >= 6",
        });
    }
    p.check_point(x)?;
    let xi = |i: usize| x[i - 1].clone();
    let link = |i: usize| S::one() + xi(i) + xi(i + 1);
    let c = (2..k).fold(S::zero(), |acc, m| {
        let rest = product((1..k).filter(|&i| i != m - 1 && i != m).map(link));
        acc + xi(m) * (xi(m) + S::one()) * (xi(m - 1) - xi(m + 1)) * rest
    });
    let q = product((4..=k - 2).map(link)) * (xi(1) * xi(2) * link(k - 1) - xi(k - 1) * xi(k) * link(1));
    Ok(c - link(2) * link(3) * q)
}

/// Sup-norm of `X(x)`; zero exactly at equilibria of the field.
pub fn equilibrium_residual<S: Scalar>(p: &Params<S>, x: &[S]) -> Result<S> {
    Ok(eval_x(p, x)?
        .iter()
        .map(Scalar::abs)
        .fold(S::zero(), |m, v| if v > m { v } else { m }))
}
