pub mod dual_tensors;
pub mod error;
pub mod format;
pub mod hermitian;
pub mod kaehler;
pub mod linalg;
pub mod projective;
pub mod sampling;
pub mod strata;

pub use error::{Error, Result};
