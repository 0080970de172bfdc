pub mod cli;
pub mod error;
pub mod linalg;
pub mod rewrite;
pub mod ring;
pub mod synth;
pub mod words;

pub use error::{Error, Result};
