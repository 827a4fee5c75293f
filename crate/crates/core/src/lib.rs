//! Schmidt-rank entanglement norms on `C^m ⊗ C^n`.
//!
//! Composite indices pair as `(i, k) ↦ i·n + k` everywhere: row `i` of the
//! first factor, row `k` of the second.

pub mod criteria;
pub mod dualnorms;
pub mod error;
pub mod interval;
pub mod kyfan;
pub mod linalg;
pub mod schmidt;
pub mod sknorm;
pub mod states;
pub mod symmetry;

#[cfg(test)]
mod test_util;

pub use error::{Error, Result};
pub use linalg::{BipartiteOperator, ComplexMatrix, ComplexVector, C64};
pub use schmidt::{PureState, SchmidtDecomposition};
