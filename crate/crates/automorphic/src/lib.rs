pub mod cli;
pub mod complex;
pub mod eisenstein;
pub mod error;
pub mod lattice;
pub mod lfunc;
pub mod numdiff;
pub mod quad;
pub mod renorm;
pub mod reptheory;
pub mod specfun;

pub use complex::{ComplexValue, Complex64};
pub use error::{Error, Result};
