// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to be
/// reported as-is in a sweep verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative input {0} has no integer square root")]
    NegativeInput(BigInt),

    #[error("zero has no factorization")]
    ZeroInput,

    /// Factorization gave up; `residual` is the cofactor that could not be split.
    #[error("unfactored: cofactor {residual} of {value} could not be split within budget")]
    Unfactored { value: BigInt, residual: BigInt },

    #[error("{0} is not squarefree")]
    NotSquarefree(BigInt),

    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(BigInt),

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i128, i128),

    #[error("form ({0}, {1}, {2}) is not a primitive positive definite form")]
    InvalidForm(i128, i128, i128),

    #[error("prime {p} is ramified in discriminant {disc}")]
    Ramified { p: u64, disc: i128 },

    #[error("prime {p} does not split in discriminant {disc} (inert)")]
    DoesNotSplit { p: u64, disc: i128 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("ring elements from different fields: d={0} and d={1}")]
    FieldMismatch(BigInt, BigInt),

    #[error("invalid ring element ({u} + {v}*sqrt({d}))/2: {reason}")]
    InvalidElement {
        u: BigInt,
        v: BigInt,
        d: BigInt,
        reason: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value {0} exceeds the supported range")]
    OutOfRange(BigInt),
}

pub type Result<T> = std::result::Result<T, Error>;
