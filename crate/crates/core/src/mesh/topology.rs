use std::collections::HashMap;

use super::{MeshError, TriMesh, DEGENERATE_AREA_FACTOR};

/// Counts and derived topology of a validated mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_char: i64,
    /// Total genus summed over components.
    pub genus: i64,
    pub boundary_loops: usize,
    pub components: usize,
    pub orientable: bool,
}

/// Check the manifold, orientation and non-degeneracy invariants and count
/// the topology.
///
/// Genus is `(2c − b − χ)/2` for `c` components and `b` boundary loops,
/// which reduces to `(2 − χ)/2` for a closed connected surface.
pub fn validate(mesh: &TriMesh, allow_boundary: bool) -> Result<TopologyReport, MeshError> {
    let tris = mesh.triangles();
    let nv = mesh.vertex_count();
    if tris.is_empty() {
        return Err(MeshError::Empty);
    }
    let mut referenced = vec![false; nv];
    for (t, tri) in tris.iter().enumerate() {
        for &v in tri {
            if v >= nv {
                return Err(MeshError::IndexOutOfRange {
                    triangle: t,
                    index: v,
                    len: nv,
                });
            }
            referenced[v] = true;
        }
    }
    if let Some(v) = referenced.iter().position(|r| !r) {
        return Err(MeshError::UnreferencedVertex(v));
    }

    let diag = mesh.bounding_box_diagonal();
    let min_area = DEGENERATE_AREA_FACTOR * diag * diag;
    for t in 0..tris.len() {
        let area = mesh.triangle_area(t);
        if !(area > min_area) {
            return Err(MeshError::DegenerateTriangle { triangle: t, area });
        }
    }

    // directed half-edges per undirected edge
    let mut halfedges: HashMap<[usize; 2], Vec<(usize, usize)>> = HashMap::new();
    for tri in tris {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            halfedges
                .entry([a.min(b), a.max(b)])
                .or_default()
                .push((a, b));
        }
    }
    let mut boundary: Vec<(usize, usize)> = Vec::new();
    let mut keys: Vec<_> = halfedges.keys().copied().collect();
    keys.sort_unstable();
    for key in &keys {
        let hs = &halfedges[key];
        match hs.len() {
            1 => {
                if !allow_boundary {
                    return Err(MeshError::UnexpectedBoundary(key[0], key[1]));
                }
                boundary.push(hs[0]);
            }
            2 => {
                if hs[0] == hs[1] {
                    return Err(MeshError::OrientationConflict(key[0], key[1]));
                }
            }
            n => return Err(MeshError::NonManifoldEdge(key[0], key[1], n)),
        }
    }

    let mut uf = UnionFind::new(nv);
    for tri in tris {
        uf.union(tri[0], tri[1]);
        uf.union(tri[1], tri[2]);
    }
    let components = (0..nv).filter(|&v| uf.find(v) == v).count();

    let mut buf = UnionFind::new(nv);
    let mut on_boundary = vec![false; nv];
    for &(a, b) in &boundary {
        buf.union(a, b);
        on_boundary[a] = true;
        on_boundary[b] = true;
    }
    let boundary_loops = (0..nv)
        .filter(|&v| on_boundary[v] && buf.find(v) == v)
        .count();

    let v = nv as i64;
    let e = keys.len() as i64;
    let f = tris.len() as i64;
    let euler_char = v - e + f;
    let genus = (2 * components as i64 - boundary_loops as i64 - euler_char) / 2;
    Ok(TopologyReport {
        vertices: nv,
        edges: keys.len(),
        faces: tris.len(),
        euler_char,
        genus,
        boundary_loops,
        components,
        orientable: true,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{primitives, Vec3};

    #[test]
    fn tetrahedron_is_a_sphere() {
        let r = validate(&primitives::tetrahedron(), false).unwrap();
        assert_eq!((r.vertices, r.edges, r.faces), (4, 6, 4));
        assert_eq!(r.euler_char, 2);
        assert_eq!(r.genus, 0);
        assert_eq!(r.components, 1);
    }

    #[test]
    fn single_triangle_is_a_disc() {
        let mesh = TriMesh::new(
            vec![Vec3::zeros(), Vec3::x(), Vec3::y()],
            vec![[0, 1, 2]],
        );
        let r = validate(&mesh, true).unwrap();
        assert_eq!(r.euler_char, 1);
        assert_eq!(r.boundary_loops, 1);
        assert_eq!(r.genus, 0);
        assert!(matches!(
            validate(&mesh, false),
            Err(MeshError::UnexpectedBoundary(..))
        ));
    }

    #[test]
    fn rejects_flipped_triangle() {
        let t = primitives::tetrahedron();
        let mut tris = t.triangles().to_vec();
        tris[0].swap(1, 2);
        let bad = TriMesh::new(t.vertices().to_vec(), tris);
        assert!(matches!(
            validate(&bad, false),
            Err(MeshError::OrientationConflict(..))
        ));
    }

    #[test]
    fn rejects_fin() {
        let t = primitives::tetrahedron();
        let mut verts = t.vertices().to_vec();
        verts.push(Vec3::new(3.0, 3.0, 3.0));
        let mut tris = t.triangles().to_vec();
        let [a, b, _] = tris[0];
        tris.push([b, a, 4]);
        let bad = TriMesh::new(verts, tris);
        assert!(matches!(
            validate(&bad, true),
            Err(MeshError::NonManifoldEdge(_, _, 3))
        ));
    }

    #[test]
    fn rejects_degenerate_and_unreferenced() {
        let mesh = TriMesh::new(
            vec![Vec3::zeros(), Vec3::x(), 2.0 * Vec3::x()],
            vec![[0, 1, 2]],
        );
        assert!(matches!(
            validate(&mesh, true),
            Err(MeshError::DegenerateTriangle { .. })
        ));
        let mesh = TriMesh::new(
            vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()],
            vec![[0, 1, 2]],
        );
        assert!(matches!(
            validate(&mesh, true),
            Err(MeshError::UnreferencedVertex(3))
        ));
    }

    #[test]
    fn two_spheres_have_two_components() {
        let a = primitives::icosphere(1, 1.0);
        let b = a.map_vertices(|v| v * 3.0);
        let r = validate(&TriMesh::concat(&[a, b]), false).unwrap();
        assert_eq!(r.components, 2);
        assert_eq!(r.euler_char, 4);
        assert_eq!(r.genus, 0);
    }
}
