//! Finite rotation groups, orbits, equivariance projection, singular-set
//! distance and Riemann–Hurwitz bookkeeping for branched covers.

mod group;
mod sphere;

use std::sync::Arc;

use thiserror::Error;

pub use group::{AxisClass, GroupName, RotationGroup};
pub use sphere::symmetric_sphere;

use crate::mesh::{PointIndex, TriMesh, Vec3};

/// Tolerance for merging orbit points.
pub const ORBIT_MERGE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("vertex {vertex} has no image under group element {element}")]
    NotEquivariant { vertex: usize, element: usize },
    #[error("mesh carries no orbit tags")]
    MissingOrbitTags,
    #[error("orbit tags belong to group {tagged}, not {requested}")]
    GroupMismatch {
        tagged: GroupName,
        requested: GroupName,
    },
    #[error("isotropy order {order} does not divide the number of sheets {sheets}")]
    NonDivisible { sheets: usize, order: usize },
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
}

/// Points of the quotient surface with non-trivial isotropy: each entry is
/// `(isotropy order m, number of such points on the quotient)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchData {
    pub entries: Vec<(usize, usize)>,
}

impl BranchData {
    pub fn new(entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self {
            entries: entries.into_iter().collect(),
        }
    }
}

/// Euler characteristic of a `sheets`-fold branched cover of a quotient
/// surface with Euler characteristic `chi_quotient`. A quotient point of
/// isotropy order `m` lifts to `sheets / m` points, each losing `m − 1`.
pub fn riemann_hurwitz_chi(
    sheets: usize,
    chi_quotient: i64,
    branch: &BranchData,
) -> Result<i64, SymmetryError> {
    assert!(sheets >= 1, "a cover has at least one sheet");
    let mut chi = sheets as i64 * chi_quotient;
    for &(order, count) in &branch.entries {
        assert!(order >= 2, "branch points have isotropy order at least 2");
        if sheets % order != 0 {
            return Err(SymmetryError::NonDivisible { sheets, order });
        }
        chi -= (count * (sheets / order) * (order - 1)) as i64;
    }
    Ok(chi)
}

/// Orbit of `point`, with images closer than [`ORBIT_MERGE_TOL`] merged.
pub fn orbit(group: &RotationGroup, point: &Vec3) -> Vec<Vec3> {
    let mut out: Vec<Vec3> = Vec::with_capacity(group.order());
    for m in group.elements() {
        let p = m * point;
        if !out.iter().any(|q| (q - p).norm() <= ORBIT_MERGE_TOL) {
            out.push(p);
        }
    }
    out
}

fn tags_for<'a>(
    mesh: &'a TriMesh,
    group: &RotationGroup,
) -> Result<&'a Arc<crate::mesh::OrbitTags>, SymmetryError> {
    let tags = mesh.orbit_tags().ok_or(SymmetryError::MissingOrbitTags)?;
    if tags.group().name() != group.name() {
        return Err(SymmetryError::GroupMismatch {
            tagged: tags.group().name(),
            requested: group.name(),
        });
    }
    Ok(tags)
}

/// Nearest equivariant configuration of the tagged vertex set: every
/// representative becomes the average of `g⁻¹ · x_{g·rep}` over the whole
/// group, and every other vertex is re-derived from it.
pub fn symmetrize(mesh: &TriMesh, group: &RotationGroup) -> Result<TriMesh, SymmetryError> {
    let tags = tags_for(mesh, group)?;
    let x = mesh.vertices();
    let n = group.order();
    let reps: Vec<Vec3> = (0..tags.orbit_count())
        .map(|o| {
            let sum: Vec3 = (0..n)
                .map(|g| group.element(g).transpose() * x[tags.image(o, g)])
                .sum();
            sum / n as f64
        })
        .collect();
    let out = (0..x.len())
        .map(|v| {
            let rep = reps[tags.orbit_of(v)];
            match tags.element_of(v) {
                0 => rep,
                g => group.element(g) * rep,
            }
        })
        .collect();
    Ok(mesh.with_vertices(out))
}

/// `max_{g, v} |g · x_v − x_{g·v}|` using the orbit tags.
pub fn symmetry_error(mesh: &TriMesh, group: &RotationGroup) -> Result<f64, SymmetryError> {
    let tags = tags_for(mesh, group)?;
    let x = mesh.vertices();
    let mut worst: f64 = 0.0;
    for g in 0..group.order() {
        let m = group.element(g);
        for (v, p) in x.iter().enumerate() {
            worst = worst.max((m * p - x[tags.permute(g, v)]).norm());
        }
    }
    Ok(worst)
}

/// Vertex-set symmetry error without tags: `max_{g, v} min_w |g · x_v − x_w|`.
pub fn vertex_set_symmetry_error(vertices: &[Vec3], group: &RotationGroup) -> f64 {
    if vertices.is_empty() {
        return 0.0;
    }
    let mut spacing = f64::INFINITY;
    for (i, p) in vertices.iter().enumerate().take(64) {
        for (j, q) in vertices.iter().enumerate() {
            if i != j {
                spacing = spacing.min((p - q).norm());
            }
        }
    }
    let cell = (0.25 * spacing).max(1e-9);
    let index = PointIndex::from_points(vertices, cell);
    let mut worst: f64 = 0.0;
    for m in group.elements() {
        for p in vertices {
            let q = m * p;
            let d = match index.find(&q, cell) {
                Some(w) => (vertices[w] - q).norm(),
                None => vertices
                    .iter()
                    .map(|w| (w - q).norm())
                    .fold(f64::INFINITY, f64::min),
            };
            worst = worst.max(d);
        }
    }
    worst
}

/// Distance from `p` to the closed ray `{λ d : λ ≥ 0}` for unit `d`.
pub fn distance_to_ray(p: &Vec3, d: &Vec3) -> f64 {
    let along = p.dot(d);
    if along <= 0.0 {
        p.norm()
    } else {
        (p - along * d).norm()
    }
}

/// Smallest distance from a mesh vertex to the union of rotation-axis rays.
pub fn singular_set_distance(mesh: &TriMesh, group: &RotationGroup) -> f64 {
    let rays: Vec<&Vec3> = group.axes().iter().flat_map(|c| c.rays.iter()).collect();
    if rays.is_empty() {
        return f64::INFINITY;
    }
    mesh.vertices()
        .iter()
        .map(|p| {
            rays.iter()
                .map(|d| distance_to_ray(p, d))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedral_branch_example() {
        let b = BranchData::new([(2, 1), (3, 1), (4, 1)]);
        assert_eq!(riemann_hurwitz_chi(24, 2, &b).unwrap(), 2);
        assert_eq!(riemann_hurwitz_chi(24, 2, &BranchData::default()).unwrap(), 48);
        assert_eq!(
            riemann_hurwitz_chi(24, 2, &BranchData::new([(4, 2)])).unwrap(),
            12
        );
        assert_eq!(
            riemann_hurwitz_chi(24, 2, &BranchData::new([(5, 1)])),
            Err(SymmetryError::NonDivisible { sheets: 24, order: 5 })
        );
    }

    #[test]
    fn orbit_sizes() {
        let g = RotationGroup::build(GroupName::O24);
        assert_eq!(orbit(&g, &Vec3::x()).len(), 6);
        assert_eq!(orbit(&g, &Vec3::zeros()).len(), 1);
        assert_eq!(orbit(&g, &Vec3::new(0.3, 0.17, 0.91)).len(), 24);
        assert_eq!(orbit(&g, &Vec3::new(1.0, 1.0, 1.0)).len(), 8);
        assert_eq!(orbit(&g, &Vec3::new(1.0, 1.0, 0.0)).len(), 12);
    }

    #[test]
    fn ray_distance() {
        let d = Vec3::z();
        assert!((distance_to_ray(&Vec3::new(0.3, 0.0, 5.0), &d) - 0.3).abs() < 1e-15);
        assert!((distance_to_ray(&Vec3::new(0.0, 0.4, -1.0), &d) - (1.16f64).sqrt()).abs() < 1e-15);
    }
}
