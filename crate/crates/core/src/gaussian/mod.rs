//! Gaussian-weighted area `F(Σ) = (1/4π) ∫_Σ e^{−|x|²/4}`, its exact discrete
//! gradient, discrete mean curvature and the self-shrinker residual
//! `H − ½⟨x, ν⟩`.

mod area;
mod curvature;
mod residual;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use area::{gaussian_area, gaussian_area_gradient, gaussian_weight, triangle_gaussian_area};
pub use curvature::{is_boundary_vertex, mean_curvature, vertex_curvature, VertexCurvature};
pub use residual::{shrinker_residual, vertex_residual, ResidualField};

use crate::mesh::MeshError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvatureScheme {
    /// Cotangent Laplacian over the mixed Voronoi area.
    #[default]
    Cotangent,
    /// Least-squares quadric over the two-ring in a tangent frame.
    QuadraticFit,
}

impl fmt::Display for CurvatureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurvatureScheme::Cotangent => "cotangent",
            CurvatureScheme::QuadraticFit => "quadratic-fit",
        })
    }
}

impl FromStr for CurvatureScheme {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cotangent" | "cot" => Ok(Self::Cotangent),
            "quadratic-fit" | "quadratic" | "fit" => Ok(Self::QuadraticFit),
            _ => Err(GaussError::UnknownScheme(s.to_string())),
        }
    }
}

/// Quadrature and curvature settings shared by every kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussKernelConfig {
    quadrature_order: usize,
    pub curvature_scheme: CurvatureScheme,
}

impl Default for GaussKernelConfig {
    fn default() -> Self {
        Self {
            quadrature_order: 3,
            curvature_scheme: CurvatureScheme::Cotangent,
        }
    }
}

impl GaussKernelConfig {
    /// `quadrature_order` is the number of points per triangle: 1, 3 or 6.
    pub fn new(quadrature_order: usize, curvature_scheme: CurvatureScheme) -> Result<Self, GaussError> {
        if ![1, 3, 6].contains(&quadrature_order) {
            return Err(GaussError::InvalidQuadratureOrder(quadrature_order));
        }
        Ok(Self {
            quadrature_order,
            curvature_scheme,
        })
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub(crate) fn rule(&self) -> &'static [([f64; 3], f64)] {
        area::quadrature_rule(self.quadrature_order)
    }
}

#[derive(Debug, Error)]
pub enum GaussError {
    #[error("quadrature order {0} is not one of 1, 3, 6")]
    InvalidQuadratureOrder(usize),
    #[error("unknown curvature scheme {0:?}")]
    UnknownScheme(String),
    #[error("quadric fit at vertex {vertex} is ill-conditioned (condition number {condition:e})")]
    IllConditionedFit { vertex: usize, condition: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}
