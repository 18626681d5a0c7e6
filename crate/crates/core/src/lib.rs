pub mod arith;
pub mod cli;
pub mod error;
pub mod families;
pub mod json;
pub mod limits;
pub mod reeb;
pub mod reproduce;
pub mod search;
pub mod topology;

pub use error::{Error, Result};
pub use limits::Limits;
