//! Exact integer and rational linear algebra.

mod group;
mod linalg;
mod matrix;
mod snf;

pub use group::{cokernel, AbelianGroup, GroupElement};
pub use linalg::{kernel_basis, rank, signature, solve_rational};
pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, SmithForm};

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("matrix is not symmetric")]
    NonSymmetric,
}

/// `x^T m y`
pub fn bilinear(x: &[BigInt], m: &IntegerMatrix, y: &[BigInt]) -> BigInt {
    x.iter().zip(m.mul_vec(y)).map(|(a, b)| a * b).sum()
}

pub fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
