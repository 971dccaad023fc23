use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{CurvatureScheme, GaussError, GaussKernelConfig};
use crate::mesh::{Adjacency, TriMesh, Vec3};

/// Largest condition number accepted for the scaled quadric design matrix.
const MAX_FIT_CONDITION: f64 = 1e8;

/// Local curvature data at one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexCurvature {
    /// Mean curvature `κ₁ + κ₂`, positive on spheres with outward normal.
    pub h: f64,
    /// Mixed Voronoi area of the vertex.
    pub area: f64,
    /// Unit normal used for the sign of `h`.
    pub normal: Vec3,
}

pub fn is_boundary_vertex(adj: &Adjacency, v: usize) -> bool {
    adj.neighbors(v).len() != adj.vertex_triangles(v).len()
}

fn cot(a: &Vec3, b: &Vec3) -> f64 {
    a.dot(b) / a.cross(b).norm()
}

/// Normal, mixed area and cotangent Laplacian of the position at `v`.
fn cotangent_stencil(
    triangles: &[[usize; 3]],
    adj: &Adjacency,
    x: &[Vec3],
    v: usize,
) -> (Vec3, f64, Vec3) {
    let mut normal = Vec3::zeros();
    let mut area = 0.0;
    let mut lap = Vec3::zeros();
    let xi = x[v];
    for &t in adj.vertex_triangles(v) {
        let tri = triangles[t];
        let k0 = tri.iter().position(|&u| u == v).unwrap();
        let (j, k) = (tri[(k0 + 1) % 3], tri[(k0 + 2) % 3]);
        let (eij, eik) = (x[j] - xi, x[k] - xi);
        let ejk = x[k] - x[j];
        let cross = eij.cross(&eik);
        normal += cross / (eij.norm_squared() * eik.norm_squared());
        // Cotangents of the angles at j and k.
        let cot_j = cot(&(-eij), &ejk);
        let cot_k = cot(&(-eik), &(-ejk));
        lap += cot_k * eij + cot_j * eik;
        let tri_area = 0.5 * cross.norm();
        let obtuse_i = eij.dot(&eik) < 0.0;
        let obtuse_j = (-eij).dot(&ejk) < 0.0;
        let obtuse_k = (-eik).dot(&(-ejk)) < 0.0;
        area += if obtuse_i {
            0.5 * tri_area
        } else if obtuse_j || obtuse_k {
            0.25 * tri_area
        } else {
            0.125 * (eij.norm_squared() * cot_k + eik.norm_squared() * cot_j)
        };
    }
    let len = normal.norm();
    let normal = if len > 0.0 { normal / len } else { normal };
    (normal, area, lap / (2.0 * area))
}

fn quadric_fit(
    adj: &Adjacency,
    x: &[Vec3],
    v: usize,
    normal: &Vec3,
) -> Result<(f64, Vec3), GaussError> {
    let stencil = adj.k_ring(v, 2);
    let ill = |condition| GaussError::IllConditionedFit { vertex: v, condition };
    if stencil.len() < 5 {
        return Err(ill(f64::INFINITY));
    }
    let helper = if normal.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let u = normal.cross(&helper).normalize();
    let w = normal.cross(&u);
    let local: Vec<Vec3> = stencil
        .iter()
        .map(|&j| {
            let q = x[j] - x[v];
            Vec3::new(q.dot(&u), q.dot(&w), q.dot(normal))
        })
        .collect();
    let scale = local.iter().map(|p| p.xy().norm()).sum::<f64>() / local.len() as f64;
    if scale == 0.0 {
        return Err(ill(f64::INFINITY));
    }
    let mut design = DMatrix::zeros(local.len(), 5);
    let mut rhs = DVector::zeros(local.len());
    for (r, p) in local.iter().enumerate() {
        let (px, py) = (p.x / scale, p.y / scale);
        design[(r, 0)] = px * px;
        design[(r, 1)] = px * py;
        design[(r, 2)] = py * py;
        design[(r, 3)] = px;
        design[(r, 4)] = py;
        rhs[r] = p.z / scale;
    }
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_FIT_CONDITION {
        return Err(ill(condition));
    }
    let coef = svd.solve(&rhs, 0.0).map_err(|_| ill(condition))?;
    // Undo the scaling: z = s·Z(x/s) gives second derivatives divided by s.
    let (a, b, c) = (coef[0] / scale, coef[1] / scale, coef[2] / scale);
    let (d, e) = (coef[3], coef[4]);
    let g = 1.0 + d * d + e * e;
    let div = ((1.0 + e * e) * 2.0 * a - 2.0 * d * e * b + (1.0 + d * d) * 2.0 * c) / g.powf(1.5);
    let fitted_normal = (normal - d * u - e * w).normalize();
    Ok((-div, fitted_normal))
}

/// Curvature at `v` using the connectivity of `mesh` and the positions `x`
/// (which may differ from the mesh's own). Only the one-ring (two-ring for
/// the quadric fit) of `v` is read. Boundary vertices get `h = NaN`.
pub fn vertex_curvature(
    mesh: &TriMesh,
    x: &[Vec3],
    v: usize,
    cfg: &GaussKernelConfig,
) -> Result<VertexCurvature, GaussError> {
    let adj = mesh.adjacency();
    let (normal, area, lap) = cotangent_stencil(mesh.triangles(), adj, x, v);
    if is_boundary_vertex(adj, v) {
        return Ok(VertexCurvature {
            h: f64::NAN,
            area,
            normal,
        });
    }
    match cfg.curvature_scheme {
        CurvatureScheme::Cotangent => Ok(VertexCurvature {
            h: -lap.dot(&normal),
            area,
            normal,
        }),
        CurvatureScheme::QuadraticFit => {
            let (h, normal) = quadric_fit(adj, x, v, &normal)?;
            Ok(VertexCurvature { h, area, normal })
        }
    }
}

/// Per-vertex mean curvature (trace convention, sign from the winding
/// orientation). Boundary vertices are reported as NaN.
pub fn mean_curvature(mesh: &TriMesh, cfg: &GaussKernelConfig) -> Result<Vec<f64>, GaussError> {
    mesh.adjacency();
    (0..mesh.vertex_count())
        .into_par_iter()
        .map(|v| vertex_curvature(mesh, mesh.vertices(), v, cfg).map(|c| c.h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::primitives;

    fn interior(mesh: &TriMesh) -> impl Iterator<Item = usize> + '_ {
        (0..mesh.vertex_count()).filter(|&v| !is_boundary_vertex(mesh.adjacency(), v))
    }

    #[test]
    fn plane_has_zero_curvature() {
        let mesh = primitives::plane_patch(8, 8, 1.5);
        for scheme in [CurvatureScheme::Cotangent, CurvatureScheme::QuadraticFit] {
            let cfg = GaussKernelConfig::new(3, scheme).unwrap();
            let h = mean_curvature(&mesh, &cfg).unwrap();
            for v in interior(&mesh) {
                assert!(h[v].abs() < 1e-10, "{scheme}: {}", h[v]);
            }
        }
    }

    #[test]
    fn sphere_of_radius_two_has_unit_curvature() {
        let mesh = primitives::icosphere(4, 2.0);
        for scheme in [CurvatureScheme::Cotangent, CurvatureScheme::QuadraticFit] {
            let cfg = GaussKernelConfig::new(3, scheme).unwrap();
            for h in mean_curvature(&mesh, &cfg).unwrap() {
                assert!((h - 1.0).abs() < 0.02, "{scheme}: {h}");
            }
        }
    }

    #[test]
    fn cylinder_curvature() {
        let r = 2f64.sqrt();
        let mesh = primitives::cylinder(64, 40, r, 3.0);
        for scheme in [CurvatureScheme::Cotangent, CurvatureScheme::QuadraticFit] {
            let cfg = GaussKernelConfig::new(3, scheme).unwrap();
            let h = mean_curvature(&mesh, &cfg).unwrap();
            for v in interior(&mesh) {
                assert!((h[v] * r - 1.0).abs() < 0.02, "{scheme}: {}", h[v]);
            }
        }
    }

    #[test]
    fn collinear_stencil_is_ill_conditioned() {
        // A thin strip: every two-ring point lies on one of two parallel lines.
        let verts = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(2.0, 1.0, 0.0),
        ];
        let tris = vec![[0, 1, 4], [0, 4, 3], [1, 2, 5], [1, 5, 4]];
        let mesh = TriMesh::new(verts, tris);
        // Vertex 1 is a boundary vertex, so call the fit directly.
        let err = quadric_fit(mesh.adjacency(), mesh.vertices(), 1, &Vec3::z()).unwrap_err();
        assert!(matches!(err, GaussError::IllConditionedFit { vertex: 1, .. }));
    }
}
