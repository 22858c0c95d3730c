//! Exact computations with Kac-Moody root data: Weyl group coset
//! combinatorics, Demazure operators on `Z[X]`, Pittie-Steinberg bases of
//! representation rings over invariants, and singular K-theory Bott-Samelson
//! bimodules with twists by diagram automorphisms.

pub mod linalg;
pub mod rootdata;
pub mod weyl;
pub mod laurent;
pub mod polymat;
pub mod steinberg;
pub mod bimodule;
pub mod schur;
pub mod verify;
pub mod cli;

pub use laurent::{LaurentError, LaurentPoly};
pub use rootdata::{DiagramAutomorphism, Parabolic, RawDatum, RootDatum, RootDatumError};
pub use weyl::{WeylElement, WeylError};
