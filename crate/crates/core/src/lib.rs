//! Generalized normalized Bessel series and coefficient certificates for
//! uniformly spirallike and uniformly convex spirallike function classes.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`bessel`]: the series `u(z) = Σ (−c/4)^n / ((κ)_n n!) z^n`, its
//!   derivatives at `z = 1` through the index-shift recursions, and
//!   single coefficients, all with rigorous truncation bounds.
//! - [`function_model`]: normalized functions `z + Σ a_n z^n` as truncated
//!   coefficient sequences, together with the Bessel-derived constructions
//!   (`z·u`, `z(2 − u)`, the Hadamard operator, the integral operator `G`)
//!   and the extremal functions of the class `R^τ(A, B)`.
//! - [`class_membership`]: coefficient criteria for `SP_p(α, β)` and
//!   `UCSP(α, β)` plus sampled checks of the defining inequalities on the
//!   unit disk.
//! - [`theorems`]: closed-form certifiers written in terms of `u(1)`,
//!   `u′(1)`, `u″(1)` and exponential majorants.
//! - [`oracle`]: independent brute-force routes used to cross-check every
//!   closed form, and golden-value regression records.
//! - [`cli`]: the `spiracert` command-line front end (`eval`, `certify`,
//!   `scan`, `verify`).

pub mod bessel;
pub mod certificate;
pub mod class_membership;
pub mod cli;
pub mod error;
pub mod function_model;
pub mod oracle;
pub mod theorems;

pub use bessel::{BesselParams, SeriesValue};
pub use certificate::{Certificate, ClaimStrength, ConditionId, Method};
pub use class_membership::{DiskGrid, SpiralParams};
pub use error::{Error, Result};
pub use function_model::{CoeffFunction, RtauParams, SignClass};
