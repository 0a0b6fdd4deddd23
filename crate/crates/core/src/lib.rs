pub mod catalog;
pub mod cli;
pub mod error;
pub mod finalg;
pub mod freealg;
pub mod hyper;
pub mod lattice;
pub mod report;
pub mod term;
pub mod variety;

pub use error::{Error, Result};
