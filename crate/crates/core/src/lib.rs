//! Exact and numerical machinery for the elliptic algebras `Q_{n,k}(E,τ)`.
//!
//! * [`contfrac`] — negative continued fractions `n/k = [n₁,…,n_g]` and the
//!   determinant sequences attached to them.
//! * [`zlinalg`] — the tridiagonal matrix `D(n₁,…,n_g)`, Smith invariants,
//!   intersection numbers and weighted-graph divisors.
//! * [`theta1`] — `θ(z)`, `θ_α(z)` and the Heisenberg action on `Θ_n(Λ)`.
//! * [`thetag`] — the `n`-dimensional space `Θ_{n/k}(Λ)` of theta functions in
//!   `g` variables, the operators `S,T,S′,T′`, the basis `w_α` and `Φ_{n/k}`.
//! * [`eqa`] — the `n²` quadratic relations, the exchange identity and point modules.
//! * [`charvar`] — structure of the characteristic variety `X_{n/k} ≅ E^g/Σ_{n/k}`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charvar;
pub mod contfrac;
pub mod cplx;
pub mod epoint;
pub mod eqa;
mod error;
pub mod theta1;
pub mod thetag;
pub mod zlinalg;

pub use contfrac::{Ncf, Slope, SlopeSequences};
pub use cplx::C64;
pub use epoint::EPoint;
pub use error::{Error, Result};
pub use theta1::LatticeParams;
pub use thetag::{GLatticeFn, ThetaSpace, ThetaSpaceParams, WBasis};
pub use zlinalg::{IntMatrix, InvariantFactors, WeightedGraph};
