//! Training matrices, the learned solution operator, and the direct
//! fundamental-solution fit used as a baseline.

mod archive;
mod field;
mod learned;
mod mfs;
mod problem;

pub use archive::OperatorArchive;
pub use field::{boundary_trace, ExactField};
pub use learned::{
    assemble_training_matrix, fundamental_matrix, learn, BindTimings, LearnTimings,
    LearnedOperator, QueryOperator,
};
pub use mfs::{mfs_direct_fit, mfs_evaluate};
pub use problem::{default_alpha, wavenumber, WaveProblem, ALPHA_FLOOR};
