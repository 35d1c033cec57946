// SPDX-License-Identifier: Apache-2.0

//! Class numbers of imaginary quadratic fields `Q(sqrt(x^2 - 4k^n))` and
//! checks of divisibility theorems about them.
//!
//! * [`arith`]: integer roots, factorization, squarefree parts, Kronecker symbols.
//! * [`quadfield`]: ring elements, binary quadratic forms, class groups.
//! * [`diophantine`]: solvers for the auxiliary exponential equations.
//! * [`theorems`]: per-point verdict engines and grid sweeps.

pub mod arith;
pub mod diophantine;
pub mod error;
pub mod quadfield;
pub mod theorems;

pub use arith::{
    squarefree_decompose, FactorBudget, Factorization, Factorizer, SquarefreeDecomposition,
};
pub use error::{Error, Result};
pub use quadfield::{class_number, ClassGroupCache, ClassGroupSummary, QuadForm, RingElement};
pub use theorems::{
    sweep, verify, AxisSpec, Budgets, GridSpec, InvariantCheck, OrderPrediction, Status, Summary,
    SweepReport, TheoremId, TheoremVerdict,
};
