//! Exact fermionic Fock-space algebra with ordering-dependent qubit mappings.
//!
//! The crate compares two ways of discarding a subset of fermionic modes:
//! the native fermionic partial trace, and the ordinary qubit partial trace
//! applied to the image of the state under a mode ordering. It also provides
//! the entanglement measures that make the ordering dependence visible.
//!
//! Modules, bottom up:
//! - [`numerics`]: dense complex matrices and a Jacobi Hermitian eigensolver.
//! - [`fock`]: modes, occupation bitstrings, ladder operators, states.
//! - [`ordering`]: mode orderings, their signs and qubit images.
//! - [`reduction`]: both partial-trace routes, the route comparison and the
//!   ordering scan.
//! - [`entanglement`]: partial transpose, negativity, PPT, separable states,
//!   concurrence and entanglement of formation.

// `!(x < tol)` rejects NaN along with large values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bipartition;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod numerics;
pub mod ordering;
pub mod reduction;
pub mod states;

pub use bipartition::BipartitionSpec;
pub use error::{Error, Result};
pub use fock::{
    parity_of, random_state, DensityOperator, FockVector, LadderKind, LadderOp, ModeSystem,
    OccupationBasisState, OperatorString, Parity, Sector,
};
pub use numerics::ComplexMatrix;
pub use ordering::{ModeOrdering, QubitState};
