//! Exact computations in the abelian category of finite-dimensional vector
//! spaces over the rationals or a prime field.
//!
//! The layers, bottom up:
//!
//! * [`scalar`] and [`matrix`]: exact arithmetic and deterministic
//!   elimination (RREF, nullspaces, particular solutions).
//! * [`category`]: objects, morphisms, canonical kernels and cokernels,
//!   biproducts and the lifts their universal properties provide.
//! * [`constructions`]: epi–mono factorization, pullbacks and pushouts
//!   assembled from biproducts, exactness.
//! * [`squares`]: semi-cartesian square analysis, composition and
//!   decomposition, kernel and cokernel squares.
//! * [`snake`]: the connecting morphism and the six-term sequence, with an
//!   element-chasing oracle.
//! * [`gen`], [`io`] and [`selftest`]: seeded diagram generators, the JSON
//!   diagram format and the property suites behind the `abcat` binary.

pub mod category;
pub mod constructions;
pub mod error;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod selftest;
pub mod snake;
pub mod squares;

pub use category::{Mor, Obj};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Scalar, ScalarField};
