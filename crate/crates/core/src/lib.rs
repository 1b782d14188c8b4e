//! Entropy operators for a two-level atom coupled dispersively to a single
//! field mode.
//!
//! The joint state `|e>|c> + |g>|s>` is pure, so both reduced states share
//! their nonzero spectrum. Because `rho_A` is 2x2, every function of it is
//! linear in `rho_A`; the same polynomial evaluated on `rho_B` gives the field
//! entropy operator in closed form, and its Wigner function follows from
//! displaced-number-state parity sums.
//!
//! Modules, bottom up:
//!
//! - [`fock`]: truncated Fock space, coherent and displaced number states
//! - [`model`]: joint and reduced states, weighted partial traces
//! - [`atom`]: closed-form 2x2 powers and the atomic entropy operator
//! - [`field`]: the field entropy operator by several equivalent routes
//! - [`wigner`]: parity-series and closed-form Wigner functions
//! - [`spectral`]: independent Jacobi eigensolver used as a reference

pub mod atom;
pub mod error;
pub mod field;
pub mod fock;
pub mod model;
pub mod qubit;
pub mod spectral;
pub mod tol;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{FieldOperator, FockVector};
pub use model::{JointState, ModelParams};
pub use qubit::QubitOperator;
pub use tol::Tolerances;
