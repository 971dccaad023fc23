use rayon::prelude::*;

use super::{gaussian_weight, vertex_curvature, GaussError, GaussKernelConfig};
use crate::mesh::{TriMesh, Vec3};

/// Per-vertex shrinker residual `r_i = H_i − ½⟨x_i, ν_i⟩` with weights
/// `w_i = A_i e^{−|x_i|²/4}` (mixed area times Gaussian weight).
///
/// Boundary vertices of open meshes carry `r = 0`, `w = 0` and are left out
/// of both norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub l2_norm: f64,
    pub linf_norm: f64,
}

impl ResidualField {
    pub fn from_parts(values: Vec<f64>, weights: Vec<f64>) -> Self {
        let l2_norm = values
            .iter()
            .zip(&weights)
            .map(|(r, w)| w * r * r)
            .sum::<f64>()
            .sqrt();
        let linf_norm = values.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        Self {
            values,
            weights,
            l2_norm,
            linf_norm,
        }
    }
}

/// Residual and weight at vertex `v` for positions `x` on the connectivity
/// of `mesh`. Returns `None` for boundary vertices.
pub fn vertex_residual(
    mesh: &TriMesh,
    x: &[Vec3],
    v: usize,
    cfg: &GaussKernelConfig,
) -> Result<Option<(f64, f64)>, GaussError> {
    let c = vertex_curvature(mesh, x, v, cfg)?;
    if c.h.is_nan() {
        return Ok(None);
    }
    let r = c.h - 0.5 * x[v].dot(&c.normal);
    Ok(Some((r, c.area * gaussian_weight(&x[v]))))
}

pub fn shrinker_residual(mesh: &TriMesh, cfg: &GaussKernelConfig) -> Result<ResidualField, GaussError> {
    mesh.adjacency();
    let pairs: Vec<(f64, f64)> = (0..mesh.vertex_count())
        .into_par_iter()
        .map(|v| vertex_residual(mesh, mesh.vertices(), v, cfg).map(|o| o.unwrap_or((0.0, 0.0))))
        .collect::<Result<_, _>>()?;
    let (values, weights) = pairs.into_iter().unzip();
    Ok(ResidualField::from_parts(values, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::primitives;

    #[test]
    fn unit_sphere_residual() {
        let mesh = primitives::icosphere(4, 1.0);
        let field = shrinker_residual(&mesh, &GaussKernelConfig::default()).unwrap();
        for r in &field.values {
            assert!((r / 1.5 - 1.0).abs() < 0.03, "{r}");
        }
    }

    #[test]
    fn plane_through_origin_residual_vanishes() {
        let mesh = primitives::plane_patch(10, 10, 2.0);
        let field = shrinker_residual(&mesh, &GaussKernelConfig::default()).unwrap();
        assert!(field.linf_norm < 1e-12);
    }

    #[test]
    fn norms_are_consistent() {
        let f = ResidualField::from_parts(vec![1.0, -3.0, 2.0], vec![0.5, 1.0, 0.25]);
        assert!((f.l2_norm * f.l2_norm - (0.5 + 9.0 + 1.0)).abs() < 1e-14);
        assert_eq!(f.linf_norm, 3.0);
    }
}
