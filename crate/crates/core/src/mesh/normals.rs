use super::{MeshError, TriMesh, Vec3};

/// Unit normal of a triangle following its winding.
pub fn face_normal(a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    (b - a).cross(&(c - a)).normalize()
}

/// Vertex normals from incident triangle cross products weighted by the
/// inverse squared lengths of the two edges meeting at the vertex. The
/// weighting is exact for vertices on a sphere and second-order accurate on
/// smooth surfaces, where the plain area-weighted average is first order.
pub fn vertex_normals(mesh: &TriMesh) -> Result<Vec<Vec3>, MeshError> {
    let verts = mesh.vertices();
    let mut acc = vec![Vec3::zeros(); verts.len()];
    for tri in mesh.triangles() {
        for k in 0..3 {
            let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let e1 = verts[b] - verts[a];
            let e2 = verts[c] - verts[a];
            acc[a] += e1.cross(&e2) / (e1.norm_squared() * e2.norm_squared());
        }
    }
    normalize_all(acc)
}

/// Area-weighted vertex normals: the sum of incident triangle cross
/// products, normalised.
pub fn area_weighted_vertex_normals(mesh: &TriMesh) -> Result<Vec<Vec3>, MeshError> {
    let verts = mesh.vertices();
    let mut acc = vec![Vec3::zeros(); verts.len()];
    for &[a, b, c] in mesh.triangles() {
        let n = (verts[b] - verts[a]).cross(&(verts[c] - verts[a]));
        acc[a] += n;
        acc[b] += n;
        acc[c] += n;
    }
    normalize_all(acc)
}

fn normalize_all(acc: Vec<Vec3>) -> Result<Vec<Vec3>, MeshError> {
    acc.into_iter()
        .enumerate()
        .map(|(i, n)| {
            let len = n.norm();
            if len > 0.0 && len.is_finite() {
                Ok(n / len)
            } else {
                Err(MeshError::ZeroNormal(i))
            }
        })
        .collect()
}
