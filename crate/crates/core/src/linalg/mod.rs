//! Exact linear algebra: rational Gauss-Jordan and fraction-free integer elimination.

pub mod integer;
pub mod rational;

use num_bigint::BigInt;

pub use integer::{IntEntry, IntMatrix, Overflow};
pub use rational::Matrix;

use crate::scalar::{common_denominator, Scalar};

/// Clears denominators by one common factor. The result has the same rank,
/// kernel and column span as `m`.
pub fn to_integer_matrix(m: &Matrix) -> IntMatrix<BigInt> {
    let den = Scalar::from_integer(common_denominator(m.entries()));
    let data = m
        .entries()
        .iter()
        .map(|v| (v * &den).to_integer())
        .collect();
    IntMatrix::from_bigints(m.rows(), m.cols(), data)
}

/// Runs `f` on `i128` entries, falling back to `BigInt` on overflow.
/// `f` receives the converted matrices.
pub fn with_fallback<R>(
    mats: &[IntMatrix<BigInt>],
    small: impl FnOnce(&[IntMatrix<i128>]) -> Result<R, Overflow>,
    big: impl FnOnce(&[IntMatrix<BigInt>]) -> Result<R, Overflow>,
) -> R {
    let converted: Result<Vec<IntMatrix<i128>>, Overflow> = mats.iter().map(|m| m.convert()).collect();
    if let Ok(c) = converted {
        if let Ok(r) = small(&c) {
            return r;
        }
    }
    big(mats).expect("BigInt arithmetic does not overflow")
}
