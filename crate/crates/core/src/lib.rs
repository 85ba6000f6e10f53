pub mod error;
pub mod klr;
pub mod scalars;
pub mod suites;
pub mod parse;
pub mod pbw;
pub mod presentation;
pub mod rep;
pub mod wreath;

pub use error::{Error, Result};
