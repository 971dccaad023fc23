use std::collections::HashMap;

/// Connectivity derived from a triangle list: incident triangles and
/// neighbours per vertex (compressed rows) and the undirected edge list.
#[derive(Debug, Clone)]
pub struct Adjacency {
    tri_offsets: Vec<usize>,
    tri_data: Vec<usize>,
    nbr_offsets: Vec<usize>,
    nbr_data: Vec<usize>,
    edges: Vec<[usize; 2]>,
    edge_triangles: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn build(vertex_count: usize, triangles: &[[usize; 3]]) -> Self {
        let mut vt: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<Vec<usize>> = Vec::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let v = tri[k];
                if v < vertex_count {
                    vt[v].push(t);
                }
                let w = tri[(k + 1) % 3];
                let key = [v.min(w), v.max(w)];
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_triangles.push(Vec::new());
                    edges.len() - 1
                });
                edge_triangles[e].push(t);
            }
        }
        let mut nb: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for &[a, b] in &edges {
            if a < vertex_count && b < vertex_count {
                nb[a].push(b);
                nb[b].push(a);
            }
        }
        let (tri_offsets, tri_data) = compress(vt);
        let (nbr_offsets, nbr_data) = compress(nb.into_iter().map(|mut v| {
            v.sort_unstable();
            v
        }));
        Self {
            tri_offsets,
            tri_data,
            nbr_offsets,
            nbr_data,
            edges,
            edge_triangles,
        }
    }

    pub fn vertex_triangles(&self, v: usize) -> &[usize] {
        &self.tri_data[self.tri_offsets[v]..self.tri_offsets[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbr_data[self.nbr_offsets[v]..self.nbr_offsets[v + 1]]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_triangles(&self, e: usize) -> &[usize] {
        &self.edge_triangles[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.tri_offsets.len() - 1
    }

    /// Vertices within `rings` edge hops of `v`, excluding `v` itself.
    pub fn k_ring(&self, v: usize, rings: usize) -> Vec<usize> {
        let mut seen = vec![v];
        let mut frontier = vec![v];
        for _ in 0..rings {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in self.neighbors(u) {
                    if !seen.contains(&w) {
                        seen.push(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        seen.swap_remove(0);
        seen
    }
}

fn compress(rows: impl IntoIterator<Item = Vec<usize>>) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0];
    let mut data = Vec::new();
    for row in rows {
        data.extend(row);
        offsets.push(data.len());
    }
    (offsets, data)
}
