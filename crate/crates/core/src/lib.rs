//! Zeros of the weight-2 Eisenstein series `E2`.
//!
//! Every Ford circle contains exactly one zero of `E2`. This crate evaluates
//! `E2`, `E4`, `E6` to arbitrary precision, inverts the map
//! `f(z) = z - 6i / (pi E2(z))` near the real axis, locates the zero attached to
//! each cusp `a/c`, checks the annulus bounds around `a/c + pi i / (6 c^2)`, and
//! computes the Fourier and Taylor expansions of the inverse map, both exactly
//! (formal power series over the rationals) and numerically.

pub mod certify;
pub mod eisenstein;
pub mod error;
pub mod expansions;
pub mod halfmap;
pub mod hp;
pub mod reference;
pub mod report;
pub mod series;
pub mod weighted;
pub mod zero_atlas;

pub use error::{Error, Result};
pub use hp::{HpComplex, Precision};
pub use series::{Coefficient, RationalSeries, Series, SeriesError};
