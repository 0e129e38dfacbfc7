#![allow(clippy::type_complexity, clippy::needless_range_loop)]

pub mod cli;
pub mod container;
pub mod dual;
pub mod error;
pub mod finmodel;
pub mod finset;
pub mod interaction;
pub mod monadic;
pub mod residual;
pub mod runners;

pub use error::{Error, Result};
