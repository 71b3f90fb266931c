//! Exact symbolic computation of motivic zeta functions and motivic nearby
//! fibers from simple-normal-crossings resolution data.
//!
//! The crate is organised bottom-up:
//!
//! * [`grothring`]: `Z[L, L^-1]`, formal Grothendieck classes, duality and
//!   the open/complete change of basis.
//! * [`ratfunc`]: rational functions in `T` with denominators
//!   `T^-m L^n - 1`, their duality, substitution, expansion and value at
//!   infinity.
//! * [`resolution`]: zeta functions, nearby fibers and the identity checkers.
//! * [`toric`]: triangulations of a simplex, h- and g-polynomials,
//!   Dehn-Sommerville, simplicial fans and the toric duality induction.
//! * [`covers`]: lattices of cyclic covers `t^d = x^p`.
//! * [`arcoracle`]: brute-force arc counts over small finite fields.

pub mod arcoracle;
pub mod covers;
mod error;
pub mod grothring;
pub mod par;
pub mod ratfunc;
pub mod resolution;
pub mod toric;

pub use error::Error;
pub use grothring::{GrothClass, LaurentPoly, StratumSymbol};
pub use par::ExecMode;
pub use ratfunc::TRational;
pub use resolution::ResolutionData;
