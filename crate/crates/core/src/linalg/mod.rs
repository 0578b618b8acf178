//! Dense complex linear algebra over named tensor factors.

mod eig;
mod matrix;
mod random;
mod shape;

pub use eig::{
    hermitian_eig, negative_part, operator_norm, polar_unitary, positive_part, singular_values,
    support_dim, support_projector, trace_norm, HermitianEig, HERMITIAN_TOL, RANK_TOL,
};
pub use matrix::{vec_inner, vec_norm, ComplexMatrix, AMBIENT_DIM_CAP};
pub use random::{orthonormalize_columns, Rng};
pub use shape::{embed_operator, partial_trace, permute, tensor, SubsystemShape};
