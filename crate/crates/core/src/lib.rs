//! Exact symbolic and numeric verification of the ODE system satisfied by
//! the principal curvatures of a biharmonic hypersurface.
//!
//! * [`poly`] exact rationals and sparse multivariate polynomials.
//! * [`rings`] the named polynomial rings the computations live in.
//! * [`derivation`] derivations induced by the ODE right-hand sides.
//! * [`elimination`] fraction-free elimination of `tau`.
//! * [`catalog`] expression parser, identity corpus, and the `Q(p)` analysis.
//! * [`odesim`] numeric integration and closed-form families.

pub mod catalog;
pub mod derivation;
pub mod elimination;
pub mod exec;
pub mod odesim;
pub mod poly;
pub mod rings;

pub use exec::Exec;
pub use poly::{PolyError, Polynomial, Rational, VarTable};
