//! A verification and simulation laboratory for the k-dimensional Lyness map
//!
//! ```text
//! F(x1, ..., xk) = (x2, ..., xk, (a + x2 + ... + xk) / x1),   a >= 0
//! ```
//!
//! Every formula in this crate is written once, generically over the
//! [`Scalar`] trait, and evaluated with three backends:
//!
//! - [`Rat`]: exact arbitrary-precision rationals, used to check identities
//!   with zero tolerance;
//! - `f64`: long orbits and flow integration;
//! - [`Dual`]: forward-mode dual numbers, used for exact gradients and
//!   directional derivatives.
//!
//! The modules follow the objects being studied:
//!
//! - [`map`]: the map, its inverse, Jacobian, fixed point and 2-periodic curves;
//! - [`invariants`]: first integrals `V1`, `V2`, `V3`, the 2-integral `W`,
//!   the polynomial `Z` and the product `Π`;
//! - [`symmetry`]: the rational vector field `X_k` and the residuals of
//!   every identity it satisfies;
//! - [`flow`]: Runge-Kutta integration of `dx/dt = X_k(x)`;
//! - [`reduction`]: order reduction of `F∘F` on level sets of `W`;
//! - [`dynamics`]: orbit signatures, the invariant set `G`, odd-period
//!   exclusion, the `v1` profile on `L` and rotation numbers;
//! - [`verify`]: seeded verification suites shared by the CLI and tests.

pub mod dynamics;
pub mod error;
pub mod flow;
pub mod invariants;
pub mod map;
pub mod matrix;
pub mod reduction;
pub mod sampling;
pub mod scalar;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use map::{OrbitTrace, Params};
pub use matrix::RatMatrix;
pub use scalar::{parse_rational, Dual, DualRat, Rat, Scalar};
