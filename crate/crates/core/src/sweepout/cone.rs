//! Radial cone strips over closed curves on the unit sphere.

use super::SweepoutError;
use crate::mesh::{TriMesh, Vec3};

/// A ruled radial strip `{λx : x ∈ curve, λ ∈ [tan(πa/2), tan(πb/2)]}`.
#[derive(Debug, Clone)]
pub struct ConeSegment {
    pub mesh: TriMesh,
    /// Set when the strip has (numerically) zero area: an empty radial
    /// interval or curves collapsed to points.
    pub degenerate: bool,
}

/// Mesh the cone strip over each closed polyline in `curves` between
/// parameters `a ≤ b`, with `radial_samples` intervals along the rulings.
pub fn cone_segment(
    curves: &[Vec<Vec3>],
    a: f64,
    b: f64,
    radial_samples: usize,
) -> Result<ConeSegment, SweepoutError> {
    if !(0.0 < a && a <= b && b < 1.0) {
        return Err(SweepoutError::InvalidParams(format!(
            "cone parameters must satisfy 0 < a ≤ b < 1, got a={a}, b={b}"
        )));
    }
    let half_pi = 0.5 * std::f64::consts::PI;
    let (ra, rb) = ((half_pi * a).tan(), (half_pi * b).tan());
    let nr = radial_samples.max(1);
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut max_len = 0.0f64;
    for curve in curves {
        let n = curve.len();
        let base = vertices.len();
        for p in curve {
            for i in 0..=nr {
                let lambda = ra + (rb - ra) * i as f64 / nr as f64;
                vertices.push(lambda * p);
            }
        }
        for j in 0..n {
            max_len = max_len.max((curve[(j + 1) % n] - curve[j]).norm());
        }
        let id = |i: usize, j: usize| base + (j % n) * (nr + 1) + i;
        for j in 0..n {
            for i in 0..nr {
                triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    let degenerate = rb - ra <= 1e-12 * rb || max_len <= 1e-12;
    Ok(ConeSegment {
        mesh: TriMesh::new(vertices, triangles),
        degenerate,
    })
}
