//! Reference meshes used for testing and as building blocks.

use std::f64::consts::PI;

use super::{refine, TriMesh, Vec3};

/// Regular tetrahedron inscribed in the unit sphere.
pub fn tetrahedron() -> TriMesh {
    let s = 1.0 / 3f64.sqrt();
    let v = vec![
        Vec3::new(s, s, s),
        Vec3::new(s, -s, -s),
        Vec3::new(-s, s, -s),
        Vec3::new(-s, -s, s),
    ];
    TriMesh::new(v, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
}

/// Icosahedron inscribed in the unit sphere, vertices at `(0, ±1, ±φ)` and
/// cyclic permutations.
pub fn icosahedron() -> TriMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let v = raw
        .iter()
        .map(|p| Vec3::new(p[0], p[1], p[2]).normalize())
        .collect();
    let t = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    TriMesh::new(v, t)
}

/// Icosahedron refined `level` times with projection onto the sphere of
/// the given radius.
pub fn icosphere(level: usize, radius: f64) -> TriMesh {
    let mut mesh = icosahedron()
        .map_vertices(|v| v * radius)
        .with_sphere_radius(Some(radius));
    for _ in 0..level {
        mesh = refine(&mesh);
    }
    mesh
}

/// Square grid in the plane `z = 0`, centred at the origin, wound so the
/// normals point along `+z`.
pub fn plane_patch(nx: usize, ny: usize, half_width: f64) -> TriMesh {
    let mut v = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            v.push(Vec3::new(
                half_width * (2.0 * i as f64 / nx as f64 - 1.0),
                half_width * (2.0 * j as f64 / ny as f64 - 1.0),
                0.0,
            ));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut t = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                t.push([a, b, c]);
                t.push([a, c, d]);
            } else {
                t.push([a, b, d]);
                t.push([b, c, d]);
            }
        }
    }
    TriMesh::new(v, t)
}

/// Disc in the plane `z = 0` with concentric rings at `radii` (first entry
/// must be 0). Each ring gets roughly square cells.
pub fn polar_disc(radii: &[f64]) -> TriMesh {
    assert!(radii.len() >= 2 && radii[0] == 0.0);
    let mut v = vec![Vec3::zeros()];
    let mut t = Vec::new();
    let mut prev: Vec<usize> = vec![0];
    let mut prev_angles: Vec<f64> = vec![0.0];
    for i in 1..radii.len() {
        let r = radii[i];
        let dr = r - radii[i - 1];
        let n = ((2.0 * PI * r / dr / 6.0).round() as usize).max(1) * 6;
        let offset = if i % 2 == 0 { 0.5 } else { 0.0 };
        let angles: Vec<f64> = (0..n)
            .map(|k| 2.0 * PI * (k as f64 + offset) / n as f64)
            .collect();
        let ring: Vec<usize> = angles
            .iter()
            .map(|&a| {
                v.push(Vec3::new(r * a.cos(), r * a.sin(), 0.0));
                v.len() - 1
            })
            .collect();
        if prev.len() == 1 {
            for k in 0..n {
                t.push([0, ring[k], ring[(k + 1) % n]]);
            }
        } else {
            zip_rings(&prev, &prev_angles, &ring, &angles, &mut t);
        }
        prev = ring;
        prev_angles = angles;
    }
    TriMesh::new(v, t)
}

/// Triangulate the annulus between two counter-clockwise rings given by
/// vertex ids and polar angles, advancing whichever side lags in angle.
pub(crate) fn zip_rings(
    inner: &[usize],
    inner_angles: &[f64],
    outer: &[usize],
    outer_angles: &[f64],
    out: &mut Vec<[usize; 3]>,
) {
    let (n, m) = (inner.len(), outer.len());
    let tau = 2.0 * PI;
    let a0 = inner_angles[0];
    let wrap_signed = |x: f64| x - tau * (x / tau).round();
    let start = (0..m)
        .min_by(|&p, &q| {
            let dp = wrap_signed(outer_angles[p] - a0).abs();
            let dq = wrap_signed(outer_angles[q] - a0).abs();
            dp.total_cmp(&dq)
        })
        .unwrap();
    let b0 = wrap_signed(outer_angles[start] - a0);
    let a = |i: usize| {
        if i >= n {
            tau
        } else {
            (inner_angles[i] - a0).rem_euclid(tau)
        }
    };
    let b = |j: usize| {
        if j >= m {
            b0 + tau
        } else {
            b0 + (outer_angles[(start + j) % m] - outer_angles[start]).rem_euclid(tau)
        }
    };
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < m {
        let vi = inner[i % n];
        let vj = outer[(start + j) % m];
        if j >= m || (i < n && a(i + 1) < b(j + 1)) {
            out.push([vi, vj, inner[(i + 1) % n]]);
            i += 1;
        } else {
            out.push([vi, vj, outer[(start + j + 1) % m]]);
            j += 1;
        }
    }
}

/// Torus around the z-axis.
pub fn torus(nu: usize, nv: usize, major: f64, minor: f64) -> TriMesh {
    let mut v = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let w = 2.0 * PI * j as f64 / nv as f64;
            let r = major + minor * w.cos();
            v.push(Vec3::new(r * u.cos(), r * u.sin(), minor * w.sin()));
        }
    }
    let id = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut t = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            t.push([a, b, c]);
            t.push([a, c, d]);
        }
    }
    TriMesh::new(v, t)
}

/// Open cylinder of the given radius around the z-axis, `z ∈ [−h, h]`,
/// outward normals.
pub fn cylinder(n_around: usize, n_along: usize, radius: f64, half_length: f64) -> TriMesh {
    let mut v = Vec::with_capacity(n_around * (n_along + 1));
    for j in 0..=n_along {
        let z = half_length * (2.0 * j as f64 / n_along as f64 - 1.0);
        let offset = if j % 2 == 0 { 0.0 } else { 0.5 };
        for i in 0..n_around {
            let a = 2.0 * PI * (i as f64 + offset) / n_around as f64;
            v.push(Vec3::new(radius * a.cos(), radius * a.sin(), z));
        }
    }
    let id = |i: usize, j: usize| j * n_around + (i % n_around);
    let mut t = Vec::with_capacity(2 * n_around * n_along);
    for j in 0..n_along {
        for i in 0..n_around {
            if j % 2 == 0 {
                t.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                t.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                t.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                t.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            }
        }
    }
    TriMesh::new(v, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;

    #[test]
    fn primitives_are_valid() {
        assert_eq!(validate(&icosahedron(), false).unwrap().genus, 0);
        assert_eq!(validate(&torus(10, 10, 2.0, 0.5), false).unwrap().genus, 1);
        let cyl = validate(&cylinder(24, 10, 1.0, 2.0), true).unwrap();
        assert_eq!((cyl.boundary_loops, cyl.genus), (2, 0));
        let plane = validate(&plane_patch(4, 5, 1.0), true).unwrap();
        assert_eq!((plane.boundary_loops, plane.euler_char), (1, 1));
    }

    #[test]
    fn polar_disc_is_a_disc() {
        let radii: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let disc = polar_disc(&radii);
        let r = validate(&disc, true).unwrap();
        assert_eq!((r.euler_char, r.boundary_loops, r.genus), (1, 1, 0));
        let area = disc.total_area();
        assert!((area - PI * 100.0).abs() / (PI * 100.0) < 2e-3, "{area}");
    }
}
