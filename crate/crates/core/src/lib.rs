#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod dd;
pub mod error;
mod optim;
pub mod reference;
pub mod samples;
pub mod solvers;
pub mod specfun;
pub mod tables;
pub mod variational;

pub use error::{Error, Result};
