//! Exact computation of universal sl2 invariants of 3-manifolds.
//!
//! The crate builds truncated universal series from cyclotomic expansions of
//! colored Jones polynomials through a Laplace transform on the color
//! variable, evaluates them at roots of unity in exact cyclotomic arithmetic,
//! and checks every value against brute-force WRT state sums.

pub mod cli;
pub mod cyclo;
pub mod error;
pub mod invariants;
pub mod laplace;
pub mod laurent;
pub mod qkit;
pub mod wrt;

pub use cyclo::{Ambient, CycElt, RootSpec};
pub use error::Error;
pub use invariants::{HabiroElem, SurgeryPresentation};
pub use laurent::{BiLaurent, LaurentPoly};
