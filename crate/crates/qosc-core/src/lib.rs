//! Exact computations with q-oscillator representations of generalized
//! quantum groups of affine type D.
#![no_std]

extern crate alloc;

pub mod coeff;
pub mod decomp;
pub mod error;
pub mod fock;
pub mod fundrep;
pub mod fusion;
pub mod lattice;
pub mod linalg;
pub mod phi;
pub mod poly;
pub mod relations;
pub mod rmatrix;
pub mod scalar;
pub mod spectral;
pub mod truncation;
pub mod word;

pub use coeff::{Coeff, Field, Param};
pub use error::Error;
pub use lattice::{Epsilon, Weight};
pub use poly::LaurentPoly;
pub use scalar::Scalar;
pub use spectral::{RatFn, SPoly, ZPoly};
