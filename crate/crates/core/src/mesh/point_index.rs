use std::collections::HashMap;

use super::Vec3;

/// Uniform-grid hash for nearest-point queries within a fixed tolerance.
pub struct PointIndex {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<Vec3>,
}

impl PointIndex {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0);
        Self {
            cell,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    pub fn from_points(points: &[Vec3], cell: f64) -> Self {
        let mut index = Self::new(cell);
        for p in points {
            index.insert(*p);
        }
        index
    }

    fn key(&self, p: &Vec3) -> [i64; 3] {
        [
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
            (p.z / self.cell).floor() as i64,
        ]
    }

    pub fn insert(&mut self, p: Vec3) -> usize {
        let id = self.points.len();
        let key = self.key(&p);
        self.cells.entry(key).or_default().push(id);
        self.points.push(p);
        id
    }

    /// Closest stored point within `tol` (which must not exceed the cell size).
    pub fn find(&self, p: &Vec3, tol: f64) -> Option<usize> {
        let [i, j, k] = self.key(p);
        let mut best: Option<(usize, f64)> = None;
        for di in -1..=1 {
            for dj in -1..=1 {
                for dk in -1..=1 {
                    if let Some(ids) = self.cells.get(&[i + di, j + dj, k + dk]) {
                        for &id in ids {
                            let d = (self.points[id] - p).norm();
                            if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                                best = Some((id, d));
                            }
                        }
                    }
                }
            }
        }
        best.map(|(id, _)| id)
    }

    /// Index of `p`, inserting it when nothing lies within `tol`.
    pub fn find_or_insert(&mut self, p: Vec3, tol: f64) -> usize {
        match self.find(&p, tol) {
            Some(id) => id,
            None => self.insert(p),
        }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec3> {
        self.points
    }
}
