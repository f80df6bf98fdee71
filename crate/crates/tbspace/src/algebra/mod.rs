//! GF(2) bit-packed linear algebra and small binary field arithmetic.

mod bits;
mod field;

pub use bits::{complete_to_basis, BitMatrix, BitVector, IncrementalBasis, RankStrategy};
pub use field::{miller_rabin_u64, FieldSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    NotInvertible,
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("order exceeds cap {cap}")]
    OrderCapExceeded { cap: u64 },
    #[error("polynomial {poly:#x} is reducible over GF(2)")]
    ReduciblePolynomial { poly: u32 },
    #[error("element {elem:#x} is not primitive for polynomial {poly:#x}")]
    NotPrimitive { elem: u16, poly: u32 },
    #[error("polynomial {poly:#x} has degree {actual}, expected {expected}")]
    BadDegree { poly: u32, expected: u32, actual: u32 },
    #[error("discrete log of zero is undefined")]
    DlogOfZero,
    #[error("claimed order {0} is not verified")]
    OrderNotVerified(String),
}
