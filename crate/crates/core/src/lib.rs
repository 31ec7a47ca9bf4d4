//! Resonant Jaynes-Cummings dynamics of a two-level atom driven by pure and
//! mixed squeezed coherent fields.
//!
//! Every closed-form quantity in this crate has an independent dense
//! truncated-Fock-space counterpart that it is tested against.

// parameter guards are written as !(x >= 0.0) so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod field;
pub mod fock;
pub mod linalg;
pub mod observables;
pub mod verify;

pub use error::{Error, Result};
