//! Exact arithmetic: scalars, exponent vectors, sparse polynomials and the
//! CR polynomial layer built on top of them.

pub mod coeff;
pub mod crpoly;
pub mod mono;
pub mod scalar;
pub mod sparse;
pub mod vartable;

pub use coeff::{q_frac, q_int, Coeff, GaussRat, Q};
pub use crpoly::{enumerate_weighted_monomials, CRPoly, Homogeneity, RawPoly};
pub use mono::Mono;
pub use scalar::{CoeffScalar, QPoly};
pub use sparse::SparsePoly;
pub use vartable::{VarKind, VarTable};
