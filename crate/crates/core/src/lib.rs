//! Explicit upper bounds on homogeneous fractional Gagliardo–Nirenberg–Sobolev
//! constants, built from closed-form parabolic smoothing constants and a
//! constrained minimization over interpolation parameters, together with a
//! quadrature-based oracle that checks every inequality on Gaussians.
//!
//! The crate is organized bottom-up:
//!
//! * [`exponents`]: Lebesgue exponents stored as reciprocals, problem
//!   admissibility and the interpolation weight θ.
//! * [`specialfn`]: log-gamma, the Beta integral, the power-product minimum
//!   and Bell polynomials.
//! * [`quadrature`]: adaptive Gauss–Kronrod and tanh-sinh rules.
//! * [`parabolic`]: sharp Young constants, heat-kernel norms and the
//!   smoothing constant of `|∇|^s e^{tΔ}`.
//! * [`feasible`]: the parameter set the bound is minimized over.
//! * [`optimizer`]: the objective, multi-start simplex search and
//!   [`optimizer::BoundCertificate`].
//! * [`oracle`]: independent numerical verification on Gaussians.
//! * [`cli`]: the `gns-bounds` command-line front end.

pub mod cli;
pub mod error;
pub mod exponents;
pub mod feasible;
pub mod optimizer;
pub mod oracle;
pub mod parabolic;
pub mod quadrature;
pub mod specialfn;

pub use error::{GnsError, Result};
pub use exponents::{GnsProblem, LebesgueExponent, Theta, ValidationReport};
pub use feasible::{FeasibilityReport, SigmaPoint};
pub use optimizer::{BoundCertificate, OptimizerConfig};
pub use parabolic::ParabolicParams;

/// Version string embedded in certificates and run manifests.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
