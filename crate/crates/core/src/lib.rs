//! Isotropic invariants of a fourth-order, three-dimensional, symmetric and
//! traceless ("harmonic") tensor.
//!
//! The crate evaluates the ten invariants `J2..J10` and `K6` exactly over the
//! rationals or in binary64, expands them symbolically as polynomials in the
//! nine independent components, and reproduces the separation witnesses that
//! show both nine-element bases `{J2,..,J10}` and
//! `{J2,J3,J5,J6,K6,J7,J8,J9,J10}` are functionally irreducible.
//!
//! ```
//! use harmonic4::{invariants, Harmonic4, Rational};
//!
//! let d = Harmonic4::<Rational>::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0]);
//! let inv = invariants(&d);
//! assert_eq!(inv.j2, Rational::from_integer(8.into()));
//! assert_eq!(inv.j4, Rational::from_integer(32.into()));
//! ```

pub mod cli;
pub mod contractions;
pub mod error;
pub mod io;
pub mod poly;
pub mod rotations;
pub mod scalar;
pub mod tensor;
pub mod verify;
pub mod witnesses;

pub use contractions::{
    bilinear_b, invariants, invariants_oracle, j4_from_mixed, mat_square, quartic_c, Invariant,
    InvariantVector, PairSym4, SymMat3,
};
pub use error::{Error, Result};
pub use poly::{symbolic_invariant, Monomial, SparsePoly};
pub use rotations::{isotropy_check, random_rotation, rotate, IsotropyReport, Orthogonal3};
pub use scalar::{Backend, Field, Rational, Ring};
pub use tensor::{canonical_index, FullSym4, Harmonic4, SlotKey};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
