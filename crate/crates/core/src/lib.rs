//! Invariant geometry of naturally reductive homogeneous spaces from
//! structure-constant data: the one-parameter family of metric connections
//! with skew torsion, their curvature and torsion calculus, the cubic
//! element of the Clifford algebra with the Casimir-plus-scalar form of the
//! squared Dirac operator, and the constant-dilaton string background
//! equations.
//!
//! Entry points:
//! - [`models`] builds the example corpus (Stiefel manifold metrics, compact
//!   groups, round spheres);
//! - [`io`] reads and writes model files and assembles reports;
//! - [`connection`], [`dirac`] and [`string_eq`] carry the geometry.

pub mod clifford;
pub mod connection;
pub mod dirac;
pub mod error;
pub mod forms;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod string_eq;
pub mod tol;

pub use clifford::{act, form_to_clifford, spin_lift, CliffordElement, Spinor, SpinorRep};
pub use error::{GeomError, Result};
pub use lie::{BilinearFormOnM, LieAlgebraData, Part, ReductiveModel, ValidationReport};
