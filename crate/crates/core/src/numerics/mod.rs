//! Complex dense-matrix arithmetic and the Hermitian eigensolver every
//! other module builds on: cyclic Jacobi eigendecomposition, PSD tests,
//! singular values, Ky Fan norms, compound matrices and the polar factor.

mod compound;
mod eig;
mod matrix;
mod polar;

pub use compound::{compound, compound_rect, index_subsets};
pub use eig::{
    eig_hermitian, is_psd, ky_fan_norm, operator_norm, singular_values, SpectralDecomposition,
    Tolerance,
};
pub use matrix::{re_part, star_conj, unitary_conj, Complex64, ComplexMatrix};
pub use polar::polar_unitary;
