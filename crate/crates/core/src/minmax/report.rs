use std::fmt;

use super::SolverError;
use crate::gaussian::{gaussian_area, shrinker_residual, GaussKernelConfig};
use crate::mesh::{validate, TriMesh};
use crate::symmetry::{symmetry_error, vertex_set_symmetry_error, RotationGroup};

/// Equivariance bound required of a converged surface.
pub const CONVERGED_SYMMETRY_TOL: f64 = 1e-10;

/// Diagnostics of a candidate self-shrinker.
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkerReport {
    /// Gaussian area `F`.
    pub f_value: f64,
    pub residual_l2: f64,
    pub residual_linf: f64,
    pub genus: i64,
    pub symmetry_error: f64,
    pub iterations: usize,
    /// Residual and symmetry error both within tolerance.
    pub converged: bool,
    pub min_triangle_quality: f64,
    pub vertices: usize,
    pub triangles: usize,
}

impl ShrinkerReport {
    /// Placeholder for meshes that could not be diagnosed.
    pub(crate) fn unavailable() -> Self {
        Self {
            f_value: f64::NAN,
            residual_l2: f64::NAN,
            residual_linf: f64::NAN,
            genus: -1,
            symmetry_error: f64::NAN,
            iterations: 0,
            converged: false,
            min_triangle_quality: f64::NAN,
            vertices: 0,
            triangles: 0,
        }
    }

    /// Flat `key=value` lines.
    pub fn to_key_value(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ShrinkerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F={:.12}", self.f_value)?;
        writeln!(f, "residual_l2={:.6e}", self.residual_l2)?;
        writeln!(f, "residual_linf={:.6e}", self.residual_linf)?;
        writeln!(f, "genus={}", self.genus)?;
        writeln!(f, "symmetry_error={:.3e}", self.symmetry_error)?;
        writeln!(f, "iterations={}", self.iterations)?;
        writeln!(f, "converged={}", self.converged)?;
        writeln!(f, "min_triangle_quality={:.6}", self.min_triangle_quality)?;
        writeln!(f, "vertices={}", self.vertices)?;
        writeln!(f, "triangles={}", self.triangles)
    }
}

/// Full diagnostic record of `mesh` as a candidate `group`-equivariant
/// self-shrinker; `converged` uses the residual tolerance `tol`.
pub fn verify(
    mesh: &TriMesh,
    group: &RotationGroup,
    kernel: &GaussKernelConfig,
    tol: f64,
) -> Result<ShrinkerReport, SolverError> {
    let topology = validate(mesh, false)?;
    let residual = shrinker_residual(mesh, kernel)?;
    let symmetry = match mesh.orbit_tags() {
        Some(_) => symmetry_error(mesh, group)?,
        None => vertex_set_symmetry_error(mesh.vertices(), group),
    };
    Ok(ShrinkerReport {
        f_value: gaussian_area(mesh, kernel),
        residual_l2: residual.l2_norm,
        residual_linf: residual.linf_norm,
        genus: topology.genus,
        symmetry_error: symmetry,
        iterations: 0,
        converged: residual.linf_norm <= tol && symmetry <= CONVERGED_SYMMETRY_TOL,
        min_triangle_quality: mesh.min_triangle_quality(),
        vertices: mesh.vertex_count(),
        triangles: mesh.triangle_count(),
    })
}
