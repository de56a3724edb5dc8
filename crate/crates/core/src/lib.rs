// `!(x >= 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod lindblad;
pub mod rotor;
pub mod selection;
pub mod stark;

pub use error::{Error, Result};
