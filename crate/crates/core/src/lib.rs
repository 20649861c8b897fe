//! Learned boundary-to-solution operators for the 2D Dirichlet Helmholtz
//! problem.
//!
//! Training solutions are fundamental solutions `Φ(x̂_i, ·)` placed on a circle
//! around the domain. From their boundary traces a Tikhonov-regularised
//! operator `W = V*(VV* + αI)^{-1}` is learned once, after which any new
//! boundary data `f` yields the interior field `u(x) ≈ b_x W f`.

pub mod analytics;
pub mod error;
pub mod point;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod lintik;
pub mod operator;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
pub use point::{Point2, Point3};
