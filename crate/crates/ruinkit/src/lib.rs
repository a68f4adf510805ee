//! Ruin probabilities in the classical compound Poisson risk model with
//! completely monotone heavy-tailed claims.
//!
//! The centerpiece is the spectral approximation: the stationary-excess
//! claim distribution is replaced by a k-phase hyperexponential built from
//! equispaced quantiles of its mixing (spectral) cdf, after which the ruin
//! probability has a closed form with a certified uniform error bound
//! `δ = ρ/((k+1)(1-ρ))`. Alongside it live the classical heavy-traffic and
//! heavy-tail approximations with their a-priori bounds, an exact reference
//! solution for the Abate-Whitt claim family, and a reproducible Monte
//! Carlo estimator.
//!
//! Typical use:
//!
//! ```
//! use ruinkit::{fit_hyperexp, ClaimModel, RuinSolution};
//!
//! let claims = ClaimModel::pareto(4.0, 3.0)?;
//! let fit = fit_hyperexp(&claims, 100)?; // sup-norm accuracy 1/101
//! let sol = RuinSolution::solve(&fit, 0.5)?;
//! assert!((sol.ruin(0.0) - 0.5).abs() < 1e-12);
//! assert!(sol.delta() < 0.01); // certified |psi - approx| bound
//! # Ok::<(), ruinkit::Error>(())
//! ```

// Frozen rational-approximation coefficients and reference digits carry
// more figures than f64 resolves.
#![allow(clippy::excessive_precision)]
// Negated comparisons like `!(x > 0.0)` are deliberate: they classify NaN
// as out of domain.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classic;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod oracle;
pub mod pk;
pub mod quad;
pub mod roots;
pub mod special;
pub mod spectral;

pub use distributions::{zeta, ClaimModel, Moment, MomentSet};
pub use error::{Error, Result};
pub use oracle::{exact_ruin_abate_whitt, grid_convolve, mc_ruin, McConfig, McEstimate};
pub use pk::{certified_bound, phases_for_bound, RuinSolution};
pub use spectral::{fit_hyperexp, HyperExp, SpectralCdf};
