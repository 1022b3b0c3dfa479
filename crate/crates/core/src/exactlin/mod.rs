//! Exact scalar tower (`Q` and `Q(sqrt(r))`) and dense exact linear algebra.

mod hnf;
mod matrix;
mod scalar;

pub use hnf::{extended_gcd, hnf, hnf_int};
pub use matrix::{scalar_vec_strings, IntVector, Matrix, MatrixJson};
pub use scalar::{is_perfect_square, is_square_free, square_free_decomposition, Scalar};

/// `diag(sqrt(r), 1/sqrt(r))` for any natural `r >= 1`.
pub fn r_matrix(r: u64) -> Matrix {
    let root = Scalar::sqrt_of(r);
    let inv = root.recip().expect("r >= 1");
    Matrix::diagonal(vec![root, inv]).expect("single radicand")
}
