use std::collections::HashMap;
use std::sync::Arc;

use super::TriMesh;

/// Split every triangle 1→4 at its edge midpoints.
///
/// Midpoints of a sphere-tagged mesh are pushed back onto the sphere and
/// orbit tags are carried over to the new vertices.
pub fn refine(mesh: &TriMesh) -> TriMesh {
    let adj = mesh.adjacency();
    let edges = adj.edges();
    let old = mesh.vertex_count();
    let mut vertices = mesh.vertices().to_vec();
    vertices.reserve(edges.len());
    for &[a, b] in edges {
        let mut m = 0.5 * (mesh.vertices()[a] + mesh.vertices()[b]);
        if let Some(r) = mesh.sphere_radius() {
            m *= r / m.norm();
        }
        vertices.push(m);
    }
    let lookup: HashMap<[usize; 2], usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, old + i)).collect();
    let edge_vertex = |a: usize, b: usize| lookup[&[a.min(b), a.max(b)]];
    let mut triangles = Vec::with_capacity(4 * mesh.triangle_count());
    for &[a, b, c] in mesh.triangles() {
        let (ab, bc, ca) = (edge_vertex(a, b), edge_vertex(b, c), edge_vertex(c, a));
        triangles.push([a, ab, ca]);
        triangles.push([b, bc, ab]);
        triangles.push([c, ca, bc]);
        triangles.push([ab, bc, ca]);
    }
    let mut out = TriMesh::new(vertices, triangles).with_sphere_radius(mesh.sphere_radius());
    if let Some(tags) = mesh.orbit_tags() {
        out = out.with_orbit_tags(Arc::new(tags.refined(edges)));
    }
    out
}
