pub mod arith;
pub mod cli;
pub mod constants;
pub mod error;
pub mod numeric;
pub mod report;
pub mod special;
pub mod theta;

pub use error::{Error, Result};
