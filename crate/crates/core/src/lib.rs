//! Exact and numerical tools for L2 cohomology of unipotent local systems on
//! punctured curves.
//!
//! The algebraic side works over Gaussian rationals: monodromy
//! representations, weight filtrations of their nilpotent logarithms, stalk and
//! global cohomology, and the weight spectral sequence at a cusp. The analytic
//! side solves the model `∂̄` equation on a punctured disk mode by mode and
//! measures weighted L2 norms.

pub mod cli;
pub mod cohomology;
pub mod dbar;
pub mod document;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod scalar;
pub mod spectral;
pub mod weight_filtration;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Vector};
pub use monodromy::{NilpotentEndomorphism, PuncturedSurfaceRep};
pub use scalar::Scalar;
pub use weight_filtration::WeightFiltration;
