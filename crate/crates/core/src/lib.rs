pub mod cli;
pub mod error;
pub mod scalars;

pub use error::{Error, ParseError, PoleError, Result};
pub mod elliptic;
pub mod flags;
pub mod pairing;
pub mod structure;
pub mod weights;
