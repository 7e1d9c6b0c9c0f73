pub mod certify;
pub mod cli;
pub mod covers;
pub mod error;
pub mod graphs;
pub mod hurwitz;
pub mod lattice;
pub mod modular;
pub mod qseries;
pub mod strata;
mod textnum;

pub use error::{Error, Result};
