//! Certified verification toolkit for the Sidon structure of floor-power
//! sequences: given an algebraic x in (1, 2), decide floors of x^n exactly,
//! relate their fine structure to conjugate-root traces, search for
//! additive collisions, bound exceptional-parameter measure, and build
//! arithmetic-progression-rich cell structures.
//!
//! All numeric claims are backed by exact dyadic arithmetic or outward
//! interval enclosures; anything undecidable at the configured precision
//! is an error, never a guess.

pub mod algnum;
pub mod aphit;
pub mod certreal;
pub mod floorpow;
pub mod measure;
pub mod sidon;

pub use certreal::{CertError, CertResult};
