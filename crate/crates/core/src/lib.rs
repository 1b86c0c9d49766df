pub mod douglas;
pub mod error;
pub mod matcore;
pub mod matrix;
pub mod oracle;
pub mod projpair;
mod svd;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use matcore::{MajorizationResult, Scale};
pub use matrix::{ComplexMatrix, C64};
pub use tolerance::ToleranceConfig;
