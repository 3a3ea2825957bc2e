pub mod eisenstein;
pub mod error;
pub mod intmat;
pub mod jacobi;
pub mod lattice;
pub mod majorant;
pub mod orthogonal;
pub mod siegel;
pub mod special;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
