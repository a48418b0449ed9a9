pub mod banded;
pub mod lanczos;
pub mod scalar;
pub mod sparse;
pub mod tridiag;

pub use banded::{BandCholesky, HermitianBand};
pub use scalar::Scalar;
pub use sparse::{Csr, SymmetricBuilder};
pub use tridiag::SymTridiag;
