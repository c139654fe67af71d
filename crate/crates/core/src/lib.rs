#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod electron_wave;
pub mod error;
pub mod external_fields;
pub mod ga3;
pub mod hydrogen;
pub mod numeric;
pub mod ofdft;
pub mod spin_dynamics;
pub mod verify;

pub use error::{Error, Result};
pub use ga3::{Multivector, Rotor};
