pub mod algebra;
pub mod error;
pub mod expr;
pub mod groebner;
pub mod liealg;
pub mod linsolve;
pub mod model;
pub mod report;
pub mod tangency;

pub use error::{Error, Result};
