//! Min-max width estimates over sweepout grids and the equivariant
//! self-shrinker solver.

mod init;
mod report;
mod solver;
mod width;

use thiserror::Error;

use crate::gaussian::{GaussError, GaussKernelConfig};
use crate::mesh::MeshError;
use crate::sweepout::SweepoutError;
use crate::symmetry::SymmetryError;

pub use init::{saddle_init, SaddleInit};
pub use report::{verify, ShrinkerReport, CONVERGED_SYMMETRY_TOL};
pub use solver::{detect_pinch, solve_shrinker, IterationRecord, SolveOutcome};
pub use width::*;

/// Tolerances and step controls of the shrinker solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Convergence threshold on the residual L∞ norm.
    pub residual_tol_linf: f64,
    /// Initial Levenberg–Marquardt damping.
    pub lambda_init: f64,
    /// Damping factor applied after an accepted step.
    pub lambda_decay: f64,
    /// Damping factor applied after a rejected step.
    pub lambda_growth: f64,
    /// Rejections tolerated within one iteration before giving up.
    pub max_rejections: usize,
    /// Normal offset used for the forward-difference Jacobian.
    pub fd_step: f64,
    /// Fraction of the tangential Laplacian applied per smoothing pass.
    pub tangential_smoothing_weight: f64,
    /// Smoothing runs only while the residual L∞ norm exceeds this.
    pub smoothing_threshold: f64,
    pub symmetrize_every_step: bool,
    /// Number of 1→4 refinements, each followed by a further solve.
    pub refinements: usize,
    /// Residual L∞ target on the coarser stages of a refinement schedule.
    pub coarse_stage_tol: f64,
    /// Largest normal offset per step, in units of the mean edge length.
    pub max_step: f64,
    /// Abort when the minimum triangle quality falls below this fraction
    /// of its initial value.
    pub quality_collapse_ratio: f64,
    /// Surface-distant vertices closer than this multiple of the local edge
    /// length count as a pinch.
    pub pinch_factor: f64,
    pub kernel: GaussKernelConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 60,
            residual_tol_linf: 1e-6,
            lambda_init: 1e-3,
            lambda_decay: 0.3,
            lambda_growth: 10.0,
            max_rejections: 12,
            fd_step: 1e-7,
            tangential_smoothing_weight: 0.3,
            smoothing_threshold: 1e-2,
            symmetrize_every_step: true,
            refinements: 0,
            coarse_stage_tol: 1e-4,
            max_step: 0.2,
            quality_collapse_ratio: 0.05,
            pinch_factor: 0.3,
            kernel: GaussKernelConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("a neck pinched or two sheets met at iteration {iteration}")]
    GenusChanged {
        iteration: usize,
        partial: Box<SolveOutcome>,
    },
    #[error("triangle quality collapsed to {quality:.3e} at iteration {iteration}")]
    MeshQualityCollapse {
        iteration: usize,
        quality: f64,
        partial: Box<SolveOutcome>,
    },
    #[error("no convergence after {iterations} iterations")]
    MaxIterations {
        iterations: usize,
        partial: Box<SolveOutcome>,
    },
    #[error("the solver needs an orbit-tagged mesh")]
    MissingOrbitTags,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Sweepout(#[from] SweepoutError),
}

impl SolverError {
    /// The last state of an aborted run, when there is one.
    pub fn partial(&self) -> Option<&SolveOutcome> {
        match self {
            SolverError::GenusChanged { partial, .. }
            | SolverError::MeshQualityCollapse { partial, .. }
            | SolverError::MaxIterations { partial, .. } => Some(partial),
            _ => None,
        }
    }
}
