use std::f64::consts::PI;
use std::sync::Arc;

use super::{GroupName, RotationGroup};
use crate::mesh::{primitives, refine, OrbitTags, TriMesh, Vec3};

fn octahedron() -> TriMesh {
    let v = vec![
        Vec3::x(),
        -Vec3::x(),
        Vec3::y(),
        -Vec3::y(),
        Vec3::z(),
        -Vec3::z(),
    ];
    let t = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    TriMesh::new(v, t)
}

/// Latitude–longitude sphere with `n_around` meridians (even) and poles on
/// the z-axis; invariant under rotations about z by `2π/n_around` and under
/// the half-turn about the x-axis.
fn uv_sphere(n_around: usize, n_rings: usize) -> TriMesh {
    let mut v = vec![Vec3::z()];
    for j in 1..n_rings {
        let theta = PI * j as f64 / n_rings as f64;
        for i in 0..n_around {
            let phi = 2.0 * PI * i as f64 / n_around as f64;
            v.push(Vec3::new(
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ));
        }
    }
    v.push(-Vec3::z());
    let south = v.len() - 1;
    let id = |j: usize, i: usize| 1 + (j - 1) * n_around + i % n_around;
    let mut t = Vec::new();
    for i in 0..n_around {
        t.push([0, id(1, i), id(1, i + 1)]);
        t.push([south, id(n_rings - 1, i + 1), id(n_rings - 1, i)]);
    }
    for j in 1..n_rings - 1 {
        for i in 0..n_around {
            let (a, b, c, d) = (id(j, i), id(j + 1, i), id(j + 1, i + 1), id(j, i + 1));
            t.push([a, b, c]);
            t.push([a, c, d]);
        }
    }
    TriMesh::new(v, t)
}

/// Origin-centred sphere mesh invariant under `group` and tagged with its
/// orbits. Polyhedral groups start from the icosahedron (T12, I60) or the
/// octahedron (O24) and are refined `level` times with projection.
pub fn symmetric_sphere(group: &Arc<RotationGroup>, level: usize, radius: f64) -> TriMesh {
    let base = match group.name() {
        GroupName::T12 | GroupName::I60 => primitives::icosahedron(),
        GroupName::O24 => octahedron(),
        GroupName::Cyclic(n) | GroupName::Dihedral(n) if 4 % n == 0 => octahedron(),
        GroupName::Cyclic(n) | GroupName::Dihedral(n) => {
            let n = n as usize;
            let around = n * (8usize << level).div_ceil(n);
            let around = around + around % 2 * n;
            return tag(
                uv_sphere(around, (around / 2).max(2)).map_vertices(|p| p * radius),
                group,
                radius,
            )
            .with_sphere_radius(Some(radius));
        }
    };
    let mut mesh = base
        .map_vertices(|p| p * radius)
        .with_sphere_radius(Some(radius));
    mesh = tag(mesh, group, radius);
    for _ in 0..level {
        mesh = refine(&mesh);
    }
    mesh
}

fn tag(mesh: TriMesh, group: &Arc<RotationGroup>, radius: f64) -> TriMesh {
    let tags = OrbitTags::from_positions(mesh.vertices(), Arc::clone(group), 1e-9 * radius)
        .expect("base sphere is invariant under its group");
    mesh.with_orbit_tags(Arc::new(tags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;
    use crate::symmetry::{symmetry_error, vertex_set_symmetry_error};

    #[test]
    fn spheres_are_invariant() {
        for name in [
            GroupName::T12,
            GroupName::O24,
            GroupName::I60,
            GroupName::Cyclic(1),
            GroupName::Cyclic(5),
            GroupName::Dihedral(3),
            GroupName::Dihedral(4),
        ] {
            let g = Arc::new(RotationGroup::build(name));
            let mesh = symmetric_sphere(&g, 2, 2.0);
            let report = validate(&mesh, false).unwrap();
            assert_eq!(report.genus, 0, "{name}");
            assert!(symmetry_error(&mesh, &g).unwrap() < 1e-12, "{name}");
            assert!(vertex_set_symmetry_error(mesh.vertices(), &g) < 1e-12, "{name}");
            for p in mesh.vertices() {
                assert!((p.norm() - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orbit_counts_match_group_action() {
        let g = Arc::new(RotationGroup::build(GroupName::O24));
        let mesh = symmetric_sphere(&g, 0, 1.0);
        let tags = mesh.orbit_tags().unwrap();
        assert_eq!(tags.orbit_count(), 1);
        assert_eq!(tags.orbit_size(0), 6);
        let fine = symmetric_sphere(&g, 1, 1.0);
        let tags = fine.orbit_tags().unwrap();
        // Octahedron vertices (6) plus edge midpoints (12).
        assert_eq!(tags.orbit_count(), 2);
    }
}
