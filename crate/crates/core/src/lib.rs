//! Reduced-rank constant-modulus (CM) adaptive beamforming for uniform
//! linear arrays.
//!
//! The centerpiece is the joint iterative optimization of a dimensionality-
//! reducing projection matrix and a reduced-rank weight vector under the CM
//! criterion with an array-response constraint ([`jio`]), plus a variant that
//! re-orthonormalizes the projection matrix by Gram-Schmidt every iteration
//! ([`gram_schmidt`]). Full-rank constrained CM/MV stochastic-gradient
//! beamformers ([`fullrank`]) provide comparison baselines, [`metrics`]
//! evaluates output SINR over seeded Monte-Carlo runs, [`complexity`] holds
//! the arithmetic cost formulas, and [`experiments`] wires everything into
//! reproducible experiment runners with CSV reporting ([`report`]).

pub mod array;
pub mod complexity;
pub mod error;
pub mod experiments;
pub mod fullrank;
pub mod gram_schmidt;
pub mod jio;
mod linalg;
pub mod metrics;
pub mod report;

pub use error::{Error, Result};
