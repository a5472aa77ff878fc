//! Certified real arithmetic: exact dyadic numbers, outward-rounded
//! intervals, integer polynomials with Sturm machinery, root isolation
//! and refinement, and exact sublevel-set measure.
//!
//! Every operation either returns an enclosure that provably contains the
//! exact result or an exact value; nothing here rounds silently to nearest.

pub mod dyadic;
pub mod error;
pub mod interval;
pub mod policy;
pub mod poly;
pub mod roots;
pub mod sublevel;

pub use dyadic::{Dyadic, Round};
pub use error::{CertError, CertResult};
pub use interval::DyadicInterval;
pub use policy::PrecisionPolicy;
pub use poly::IntPolynomial;
pub use roots::{isolate_all, isolate_in_window, refine_root};
pub use sublevel::sublevel_measure;
