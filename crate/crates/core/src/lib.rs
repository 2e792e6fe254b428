pub mod arith;
pub mod dpoly;
pub mod error;
pub mod groups;
pub mod metacyclic;
pub mod obstruction;
pub mod report;
pub mod selftest;
pub mod unipotent;
pub mod words;

pub use error::{Error, Result};
