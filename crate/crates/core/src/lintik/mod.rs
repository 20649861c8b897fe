//! Dense complex linear algebra and Tikhonov-regularised least squares.

mod cholesky;
mod matrix;
mod qr;
mod tikhonov;
mod vector;

pub use cholesky::{hermitian_solve, Cholesky};
pub use matrix::ComplexMatrix;
pub use tikhonov::{
    dual_objective, learn_operator_matrix, primal_objective, tikhonov_dual, tikhonov_primal,
};
pub use vector::ComplexVector;

pub(crate) use vector::dot;
