//! Indexed, oriented triangle meshes.
//!
//! A [`TriMesh`] is a vertex list plus a list of counter-clockwise vertex
//! triples. Edge and vertex adjacency are built lazily on first use and shared
//! between meshes that have the same connectivity, so moving vertices
//! (`with_vertices`) is cheap.

mod adjacency;
mod io;
mod normals;
mod orbits;
mod point_index;
pub mod primitives;
mod refine;
mod topology;

use std::sync::{Arc, OnceLock};

use nalgebra::Vector3;
use thiserror::Error;

pub use adjacency::Adjacency;
pub use io::{read_mesh, write_mesh, MeshFormat};
pub use normals::{area_weighted_vertex_normals, face_normal, vertex_normals};
pub use orbits::OrbitTags;
pub use point_index::PointIndex;
pub use refine::refine;
pub use topology::{validate, TopologyReport};

pub type Vec3 = Vector3<f64>;

/// Relative area below which a triangle counts as degenerate, measured
/// against the squared bounding-box diagonal.
pub const DEGENERATE_AREA_FACTOR: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh has no triangles")]
    Empty,
    #[error("triangle {triangle} references vertex {index} but the mesh has {len} vertices")]
    IndexOutOfRange {
        triangle: usize,
        index: usize,
        len: usize,
    },
    #[error("vertex {0} is not referenced by any triangle")]
    UnreferencedVertex(usize),
    #[error("edge ({0}, {1}) is shared by {2} triangles")]
    NonManifoldEdge(usize, usize, usize),
    #[error("edge ({0}, {1}) has the same direction in both of its triangles")]
    OrientationConflict(usize, usize),
    #[error("triangle {triangle} is degenerate (area {area:e})")]
    DegenerateTriangle { triangle: usize, area: f64 },
    #[error("edge ({0}, {1}) lies on a boundary but boundaries were not allowed")]
    UnexpectedBoundary(usize, usize),
    #[error("incident triangle normals cancel at vertex {0}")]
    ZeroNormal(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported feature at line {line}: {message}")]
    UnsupportedFeature { line: usize, message: String },
    #[error("unknown mesh format for {0:?} (expected .obj or .ply)")]
    UnknownFormat(std::path::PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    orbits: Option<Arc<OrbitTags>>,
    sphere_radius: Option<f64>,
    adjacency: OnceLock<Arc<Adjacency>>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Self {
        Self {
            vertices,
            triangles,
            orbits: None,
            sphere_radius: None,
            adjacency: OnceLock::new(),
        }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn orbit_tags(&self) -> Option<&Arc<OrbitTags>> {
        self.orbits.as_ref()
    }

    /// Radius of the origin-centred sphere that refinement projects new
    /// vertices onto, if the mesh was built as a sphere.
    pub fn sphere_radius(&self) -> Option<f64> {
        self.sphere_radius
    }

    pub fn with_orbit_tags(mut self, tags: Arc<OrbitTags>) -> Self {
        assert_eq!(
            tags.vertex_count(),
            self.vertices.len(),
            "orbit tags do not match the vertex count"
        );
        self.orbits = Some(tags);
        self
    }

    pub fn without_orbit_tags(mut self) -> Self {
        self.orbits = None;
        self
    }

    pub fn with_sphere_radius(mut self, radius: Option<f64>) -> Self {
        self.sphere_radius = radius;
        self
    }

    /// Same connectivity and tags, new positions. Adjacency is shared.
    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Self {
        assert_eq!(vertices.len(), self.vertices.len());
        let adjacency = OnceLock::new();
        if let Some(adj) = self.adjacency.get() {
            let _ = adjacency.set(Arc::clone(adj));
        }
        Self {
            vertices,
            triangles: self.triangles.clone(),
            orbits: self.orbits.clone(),
            sphere_radius: None,
            adjacency,
        }
    }

    pub fn adjacency(&self) -> &Arc<Adjacency> {
        self.adjacency
            .get_or_init(|| Arc::new(Adjacency::build(self.vertices.len(), &self.triangles)))
    }

    /// Reverse the winding of every triangle.
    pub fn flipped(&self) -> Self {
        let triangles = self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect();
        let mut mesh = TriMesh::new(self.vertices.clone(), triangles);
        mesh.orbits = self.orbits.clone();
        mesh.sphere_radius = self.sphere_radius;
        mesh
    }

    pub fn map_vertices(&self, f: impl Fn(&Vec3) -> Vec3) -> Self {
        self.with_vertices(self.vertices.iter().map(f).collect())
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        triangle_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    pub fn bounding_box_diagonal(&self) -> f64 {
        if self.vertices.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.adjacency()
            .edges()
            .iter()
            .map(|&[a, b]| (self.vertices[a] - self.vertices[b]).norm())
            .fold(0.0, f64::max)
    }

    /// Smallest triangle quality `4√3·A / Σ|e|²` (1 for equilateral, 0 for
    /// degenerate).
    pub fn min_triangle_quality(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| {
                triangle_quality(&self.vertices[a], &self.vertices[b], &self.vertices[c])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Disjoint union; orbit tags are dropped.
    pub fn concat(meshes: &[TriMesh]) -> TriMesh {
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        for m in meshes {
            let offset = vertices.len();
            vertices.extend_from_slice(&m.vertices);
            triangles.extend(
                m.triangles
                    .iter()
                    .map(|t| [t[0] + offset, t[1] + offset, t[2] + offset]),
            );
        }
        TriMesh::new(vertices, triangles)
    }
}

pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

pub fn triangle_quality(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let denom = (b - a).norm_squared() + (c - b).norm_squared() + (a - c).norm_squared();
    if denom == 0.0 {
        return 0.0;
    }
    4.0 * 3f64.sqrt() * triangle_area(a, b, c) / denom
}
