use std::collections::HashMap;
use std::sync::Arc;

use super::point_index::PointIndex;
use super::Vec3;
use crate::symmetry::{RotationGroup, SymmetryError};

/// Group-orbit bookkeeping for an equivariant vertex set.
///
/// Every vertex `v` belongs to orbit `o` with representative `rep(o)` and
/// carries an element index `g_v` with `x_v = g_v · x_rep`. For each orbit the
/// table `image(o, g)` gives the vertex that `g` sends the representative to,
/// so the action of the group on vertex indices is available without any
/// geometric lookup.
#[derive(Debug, Clone)]
pub struct OrbitTags {
    group: Arc<RotationGroup>,
    vertex_orbit: Vec<u32>,
    vertex_element: Vec<u16>,
    reps: Vec<u32>,
    table: Vec<u32>,
}

impl OrbitTags {
    /// Tag vertices by matching `g · x` against the vertex set within `tol`.
    pub fn from_positions(
        vertices: &[Vec3],
        group: Arc<RotationGroup>,
        tol: f64,
    ) -> Result<Self, SymmetryError> {
        let n = group.order();
        let index = PointIndex::from_points(vertices, tol.max(1e-12) * 4.0);
        let mut vertex_orbit = vec![u32::MAX; vertices.len()];
        let mut vertex_element = vec![0u16; vertices.len()];
        let mut reps = Vec::new();
        let mut table = Vec::new();
        for v in 0..vertices.len() {
            if vertex_orbit[v] != u32::MAX {
                continue;
            }
            let o = reps.len() as u32;
            reps.push(v as u32);
            for (g, m) in group.elements().iter().enumerate() {
                let p = m * vertices[v];
                let w = index
                    .find(&p, tol)
                    .ok_or(SymmetryError::NotEquivariant { vertex: v, element: g })?;
                if vertex_orbit[w] == u32::MAX {
                    vertex_orbit[w] = o;
                    vertex_element[w] = g as u16;
                } else if vertex_orbit[w] != o {
                    return Err(SymmetryError::NotEquivariant { vertex: v, element: g });
                }
                table.push(w as u32);
            }
            debug_assert_eq!(table.len(), reps.len() * n);
        }
        Ok(Self {
            group,
            vertex_orbit,
            vertex_element,
            reps,
            table,
        })
    }

    pub fn group(&self) -> &Arc<RotationGroup> {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_orbit.len()
    }

    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    pub fn orbit_of(&self, v: usize) -> usize {
        self.vertex_orbit[v] as usize
    }

    pub fn element_of(&self, v: usize) -> usize {
        self.vertex_element[v] as usize
    }

    pub fn representative(&self, orbit: usize) -> usize {
        self.reps[orbit] as usize
    }

    pub fn is_representative(&self, v: usize) -> bool {
        self.reps[self.orbit_of(v)] as usize == v
    }

    /// Vertex that element `g` sends the representative of `orbit` to.
    pub fn image(&self, orbit: usize, g: usize) -> usize {
        self.table[orbit * self.group.order() + g] as usize
    }

    /// Vertex index of `g · x_v`.
    pub fn permute(&self, g: usize, v: usize) -> usize {
        let o = self.orbit_of(v);
        self.image(o, self.group.compose(g, self.element_of(v)))
    }

    /// Elements fixing the representative of `orbit`.
    pub fn stabilizer(&self, orbit: usize) -> Vec<usize> {
        let rep = self.representative(orbit);
        (0..self.group.order())
            .filter(|&g| self.image(orbit, g) == rep)
            .collect()
    }

    pub fn orbit_size(&self, orbit: usize) -> usize {
        self.group.order() / self.stabilizer(orbit).len()
    }

    /// Distinct members of `orbit`, in element order.
    pub fn members(&self, orbit: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut out: Vec<usize> = Vec::with_capacity(n);
        for g in 0..n {
            let w = self.image(orbit, g);
            if !out.contains(&w) {
                out.push(w);
            }
        }
        out
    }

    /// Tags for a mesh refined 1→4, where edge `e` (in `edges` order) received
    /// the new vertex `old_count + e`.
    pub fn refined(&self, edges: &[[usize; 2]]) -> Self {
        let old = self.vertex_count();
        let n = self.group.order();
        let lookup: HashMap<[usize; 2], usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut tags = self.clone();
        tags.vertex_orbit.resize(old + edges.len(), u32::MAX);
        tags.vertex_element.resize(old + edges.len(), 0);
        for (e, &[a, b]) in edges.iter().enumerate() {
            if tags.vertex_orbit[old + e] != u32::MAX {
                continue;
            }
            let o = tags.reps.len() as u32;
            tags.reps.push((old + e) as u32);
            for g in 0..n {
                let (pa, pb) = (self.permute(g, a), self.permute(g, b));
                let image = old + lookup[&[pa.min(pb), pa.max(pb)]];
                if tags.vertex_orbit[image] == u32::MAX {
                    tags.vertex_orbit[image] = o;
                    tags.vertex_element[image] = g as u16;
                }
                tags.table.push(image as u32);
            }
        }
        tags
    }
}
