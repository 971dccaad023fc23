//! Face-polar meshing of equivariant shells.
//!
//! The base face of a [`PlatonicScheme`] is meshed in polar coordinates
//! `(d, φ)` about its centre: rays at uniform `φ` (with the corners on
//! rays) and, along every ray, a profile curve in the `(d, r)` half-plane.
//! The remaining faces are images of the base face under group elements,
//! and vertices on face edges are welded. The ray set is invariant under
//! the face stabiliser and symmetric about every edge midpoint, so
//! neighbouring faces produce identical edge vertices.

use std::f64::consts::PI;

use super::scheme::PlatonicScheme;
use crate::mesh::{PointIndex, TriMesh, Vec3};

/// Sampling density of the face-polar grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// Rays per sector between consecutive corners.
    pub rays_per_sector: usize,
    /// Samples along each sheet from face edge to hole.
    pub sheet_samples: usize,
    /// Samples across a neck connector.
    pub neck_samples: usize,
}

impl Resolution {
    /// Resolution doubling per level; level 3 gives roughly 1.3k triangles
    /// per face for a doubled surface.
    pub fn from_level(level: usize) -> Self {
        let n = 1usize << level.min(7);
        Self {
            rays_per_sector: n,
            sheet_samples: n,
            neck_samples: (n / 2).max(2),
        }
    }
}

/// Polar angles of the rays of the base face.
pub(crate) fn ray_angles(scheme: &PlatonicScheme, res: &Resolution) -> Vec<f64> {
    let n = scheme.neck_order() * res.rays_per_sector;
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Base-face mesh with flags marking vertices on the face boundary.
struct FacePatch {
    vertices: Vec<Vec3>,
    on_edge: Vec<bool>,
    triangles: Vec<[usize; 3]>,
}

fn replicate(scheme: &PlatonicScheme, patch: &FacePatch) -> TriMesh {
    let scale = patch
        .vertices
        .iter()
        .map(|v| v.norm())
        .fold(1.0f64, f64::max);
    let tol = 1e-9 * scale;
    let mut index = PointIndex::new(4.0 * tol);
    let mut index_ids: Vec<usize> = Vec::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for &g in &scheme.face_elements {
        let m = scheme.group.element(g);
        let ids: Vec<usize> = patch
            .vertices
            .iter()
            .zip(&patch.on_edge)
            .map(|(p, &edge)| {
                let q = m * p;
                if edge {
                    if let Some(k) = index.find(&q, tol) {
                        return index_ids[k];
                    }
                    index.insert(q);
                    index_ids.push(vertices.len());
                }
                vertices.push(q);
                vertices.len() - 1
            })
            .collect();
        triangles.extend(
            patch
                .triangles
                .iter()
                .map(|t| [ids[t[0]], ids[t[1]], ids[t[2]]]),
        );
    }
    TriMesh::new(vertices, triangles)
}

/// Concentric spheres of the given radii, each meshed as polar discs on the
/// tessellation faces. Spheres with `outward == false` are wound inwards.
pub(crate) fn polar_spheres(
    scheme: &PlatonicScheme,
    res: &Resolution,
    spheres: &[(f64, bool)],
) -> TriMesh {
    let face = &scheme.base_face;
    let phis = ray_angles(scheme, res);
    let nr = res.sheet_samples;
    let nphi = phis.len();
    let mut patch = FacePatch {
        vertices: Vec::new(),
        on_edge: Vec::new(),
        triangles: Vec::new(),
    };
    for &(radius, outward) in spheres {
        let base = patch.vertices.len();
        patch.vertices.push(radius * face.center);
        patch.on_edge.push(false);
        for &phi in &phis {
            let b = face.boundary_distance(phi);
            for i in 1..=nr {
                patch.vertices.push(radius * face.point(b * i as f64 / nr as f64, phi));
                patch.on_edge.push(i == nr);
            }
        }
        let id = |i: usize, j: usize| {
            if i == 0 {
                base
            } else {
                base + 1 + (j % nphi) * nr + (i - 1)
            }
        };
        let mut push = |t: [usize; 3]| {
            patch
                .triangles
                .push(if outward { t } else { [t[0], t[2], t[1]] });
        };
        for j in 0..nphi {
            push([id(0, j), id(1, j), id(1, j + 1)]);
            for i in 1..nr {
                push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    replicate(scheme, &patch)
}

/// A holed shell. For every ray `φ`, `profile(φ, B)` returns the `(d, r)`
/// polyline from the inner sheet at the face edge (`d = B`) through the
/// neck to the outer sheet at the face edge. Every ray must return the
/// same number of points.
pub(crate) fn holed_shell(
    scheme: &PlatonicScheme,
    res: &Resolution,
    profile: impl Fn(f64, f64) -> Vec<(f64, f64)>,
) -> TriMesh {
    let face = &scheme.base_face;
    let phis = ray_angles(scheme, res);
    let nphi = phis.len();
    let mut patch = FacePatch {
        vertices: Vec::new(),
        on_edge: Vec::new(),
        triangles: Vec::new(),
    };
    let mut n = 0;
    for (j, &phi) in phis.iter().enumerate() {
        let b = face.boundary_distance(phi);
        let curve = profile(phi, b);
        if j == 0 {
            n = curve.len();
            assert!(n >= 2, "profile needs at least two points");
        }
        assert_eq!(curve.len(), n, "every ray needs the same number of samples");
        for (i, &(d, r)) in curve.iter().enumerate() {
            patch.vertices.push(r * face.point(d, phi));
            patch.on_edge.push(i == 0 || i == n - 1);
        }
    }
    let id = |i: usize, j: usize| (j % nphi) * n + i;
    for j in 0..nphi {
        for i in 0..n - 1 {
            patch.triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            patch.triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    replicate(scheme, &patch)
}

/// Normalised sample positions `ψ ∈ [0, 1]` along a sheet from a hole of
/// radius `hole` to the face edge at `edge`: steps grow geometrically away
/// from the hole (conformal near it) and are capped at the uniform spacing.
pub(crate) fn graded_samples(hole: f64, edge: f64, uniform: usize, ratio: f64) -> Vec<f64> {
    let span = edge - hole;
    let h_max = span / uniform as f64;
    let mut d = vec![hole];
    let mut x = hole;
    while x < edge {
        let step = (ratio * x).max(1e-12).min(h_max);
        x += step;
        d.push(x);
        if d.len() > 8 * uniform + 64 {
            break;
        }
    }
    // Merge a last sliver step into its predecessor, then rescale to land
    // exactly on the edge.
    let n = d.len();
    if n > 2 && (d[n - 1] - edge) > 0.5 * (d[n - 1] - d[n - 2]) {
        d.pop();
    }
    let last = *d.last().unwrap();
    d.iter()
        .map(|x| if last > hole { (x - hole) / (last - hole) } else { 0.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;
    use crate::sweepout::scheme::SchemeName;
    use crate::symmetry::vertex_set_symmetry_error;

    #[test]
    fn polar_spheres_are_closed_and_symmetric() {
        for name in SchemeName::ALL {
            let scheme = PlatonicScheme::build(name);
            let mesh = polar_spheres(&scheme, &Resolution::from_level(2), &[(2.0, true), (1.0, false)]);
            let report = validate(&mesh, false).unwrap();
            assert_eq!((report.components, report.genus), (2, 0), "{name}");
            assert!(vertex_set_symmetry_error(mesh.vertices(), &scheme.group) < 1e-12);
        }
    }

    #[test]
    fn simple_shell_has_expected_genus() {
        for name in SchemeName::ALL {
            let scheme = PlatonicScheme::build(name);
            let mesh = holed_shell(&scheme, &Resolution::from_level(2), |_, b| {
                let hole = 0.15;
                let along = |i: usize| hole + (b - hole) * i as f64 / 4.0;
                let inner = (0..=4).rev().map(|i| (along(i), 1.5));
                let outer = (0..=4).map(|i| (along(i), 2.0));
                inner.chain([(hole, 1.75)]).chain(outer).collect()
            });
            let report = validate(&mesh, false).unwrap();
            assert_eq!(report.genus as usize, scheme.expected_genus(), "{name}");
            assert_eq!(report.components, 1);
        }
    }

    #[test]
    fn graded_samples_are_monotone() {
        let s = graded_samples(1e-4, 0.8, 8, 0.2);
        assert_eq!(s[0], 0.0);
        assert_eq!(*s.last().unwrap(), 1.0);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        let u = graded_samples(0.5, 0.8, 8, 0.2);
        assert!(u.len() >= 8);
    }
}
