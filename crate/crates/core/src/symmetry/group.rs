use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Rotation3, Unit};

use super::SymmetryError;
use crate::mesh::Vec3;

const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupName {
    Cyclic(u32),
    Dihedral(u32),
    T12,
    O24,
    I60,
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Cyclic(n) => write!(f, "C{n}"),
            GroupName::Dihedral(n) => write!(f, "D{n}"),
            GroupName::T12 => f.write_str("T12"),
            GroupName::O24 => f.write_str("O24"),
            GroupName::I60 => f.write_str("I60"),
        }
    }
}

impl FromStr for GroupName {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let parse_n = |rest: &str| {
            rest.parse::<u32>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| SymmetryError::UnknownGroup(s.to_string()))
        };
        match lower.as_str() {
            "t12" | "t" => Ok(GroupName::T12),
            "o24" | "o" => Ok(GroupName::O24),
            "i60" | "i" => Ok(GroupName::I60),
            _ if lower.starts_with('c') => parse_n(&lower[1..]).map(GroupName::Cyclic),
            _ if lower.starts_with('d') => parse_n(&lower[1..]).map(GroupName::Dihedral),
            _ => Err(SymmetryError::UnknownGroup(s.to_string())),
        }
    }
}

/// One orbit of rotation-axis rays: all rays in the class have the same
/// isotropy order.
#[derive(Debug, Clone)]
pub struct AxisClass {
    pub order: usize,
    pub rays: Vec<Vec3>,
}

/// A finite subgroup of SO(3), with its multiplication table and the
/// classes of rays carrying non-trivial isotropy.
#[derive(Debug, Clone)]
pub struct RotationGroup {
    name: GroupName,
    elements: Vec<Matrix3<f64>>,
    product: Vec<u16>,
    inverse: Vec<u16>,
    axes: Vec<AxisClass>,
}

impl RotationGroup {
    pub fn build(name: GroupName) -> Self {
        let generators = generators(name);
        let elements = close(&generators);
        let n = elements.len();
        let find = |m: &Matrix3<f64>| -> usize {
            elements
                .iter()
                .position(|e| (e - m).abs().max() < MATCH_TOL)
                .expect("group is closed")
        };
        let mut product = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                product[i * n + j] = find(&(elements[i] * elements[j])) as u16;
            }
        }
        let inverse = (0..n)
            .map(|i| (0..n).find(|&j| product[i * n + j] == 0).unwrap() as u16)
            .collect();
        let mut group = Self {
            name,
            elements,
            product,
            inverse,
            axes: Vec::new(),
        };
        group.axes = group.compute_axes();
        group
    }

    pub fn name(&self) -> GroupName {
        self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element 0 is the identity.
    pub fn elements(&self) -> &[Matrix3<f64>] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &Matrix3<f64> {
        &self.elements[g]
    }

    /// Index of `g_a · g_b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order() + b] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    pub fn axes(&self) -> &[AxisClass] {
        &self.axes
    }

    /// Classes with the given isotropy order, in construction order.
    pub fn axis_classes(&self, order: usize) -> Vec<&AxisClass> {
        self.axes.iter().filter(|a| a.order == order).collect()
    }

    /// Number of elements fixing `p`.
    pub fn isotropy_order(&self, p: &Vec3) -> usize {
        let tol = MATCH_TOL * p.norm().max(1.0);
        self.elements
            .iter()
            .filter(|m| (*m * p - p).norm() < tol)
            .count()
    }

    /// `1 + Σ_lines (m − 1)` counted over rays (two rays per line), which
    /// must equal the group order.
    pub fn rotation_count_from_axes(&self) -> usize {
        let ray_sum: usize = self.axes.iter().map(|c| c.rays.len() * (c.order - 1)).sum();
        1 + ray_sum / 2
    }

    fn compute_axes(&self) -> Vec<AxisClass> {
        let mut rays: Vec<Vec3> = Vec::new();
        for m in &self.elements[1..] {
            let axis = rotation_axis(m);
            for dir in [axis, -axis] {
                if !rays.iter().any(|r| (r - dir).norm() < 1e-8) {
                    rays.push(dir);
                }
            }
        }
        let mut classes: Vec<AxisClass> = Vec::new();
        let mut assigned = vec![false; rays.len()];
        for i in 0..rays.len() {
            if assigned[i] {
                continue;
            }
            let mut class = Vec::new();
            for m in &self.elements {
                let img = m * rays[i];
                if let Some(j) = rays.iter().position(|r| (r - img).norm() < 1e-8) {
                    if !assigned[j] {
                        assigned[j] = true;
                        class.push(rays[j]);
                    }
                }
            }
            classes.push(AxisClass {
                order: self.isotropy_order(&rays[i]),
                rays: class,
            });
        }
        classes.sort_by(|a, b| b.order.cmp(&a.order));
        classes
    }
}

/// Unit axis of a non-identity rotation (sign arbitrary). Half-turns have
/// no skew part, so their axis is read off `R + I = 2aaᵀ`.
fn rotation_axis(m: &Matrix3<f64>) -> Vec3 {
    let skew = Vec3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
    if skew.norm() > 1e-6 {
        return skew.normalize();
    }
    let sym = m + Matrix3::identity();
    let col = (0..3)
        .map(|j| sym.column(j).into_owned())
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    col.normalize()
}

fn rotation(axis: Vec3, angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle).into_inner()
}

fn generators(name: GroupName) -> Vec<Matrix3<f64>> {
    let z = Vec3::z();
    match name {
        GroupName::Cyclic(n) => vec![rotation(z, 2.0 * PI / n as f64)],
        GroupName::Dihedral(n) => vec![rotation(z, 2.0 * PI / n as f64), rotation(Vec3::x(), PI)],
        GroupName::T12 => vec![
            rotation(Vec3::new(1.0, 1.0, 1.0), 2.0 * PI / 3.0),
            rotation(z, PI),
        ],
        GroupName::O24 => vec![
            rotation(Vec3::new(1.0, 1.0, 1.0), 2.0 * PI / 3.0),
            rotation(z, PI / 2.0),
        ],
        GroupName::I60 => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            vec![
                rotation(Vec3::new(1.0, 1.0, 1.0), 2.0 * PI / 3.0),
                rotation(z, PI),
                rotation(Vec3::new(0.0, 1.0, phi), 2.0 * PI / 5.0),
            ]
        }
    }
}

/// Breadth-first closure of the generated group; exact entries are snapped
/// so products stay clean.
fn close(generators: &[Matrix3<f64>]) -> Vec<Matrix3<f64>> {
    let snap = |m: Matrix3<f64>| m.map(|x| if x.abs() < 1e-15 { 0.0 } else { x });
    let mut elements = vec![Matrix3::identity()];
    let mut queue = VecDeque::from([Matrix3::identity()]);
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let p = snap(h * g);
            if !elements.iter().any(|e| (e - p).abs().max() < MATCH_TOL) {
                elements.push(p);
                queue.push_back(p);
            }
        }
        assert!(elements.len() <= 120, "generators do not span a finite group");
    }
    elements
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(RotationGroup::build(GroupName::T12).order(), 12);
        assert_eq!(RotationGroup::build(GroupName::O24).order(), 24);
        assert_eq!(RotationGroup::build(GroupName::I60).order(), 60);
        assert_eq!(RotationGroup::build(GroupName::Cyclic(1)).order(), 1);
        assert_eq!(RotationGroup::build(GroupName::Cyclic(5)).order(), 5);
        assert_eq!(RotationGroup::build(GroupName::Dihedral(3)).order(), 6);
    }

    #[test]
    fn octahedral_axis_census() {
        let g = RotationGroup::build(GroupName::O24);
        let census: Vec<(usize, usize)> = g.axes().iter().map(|c| (c.order, c.rays.len())).collect();
        assert_eq!(census, vec![(4, 6), (3, 8), (2, 12)]);
        for r in &g.axes()[0].rays {
            assert_eq!(r.iter().filter(|x| x.abs() > 0.5).count(), 1);
        }
    }

    #[test]
    fn axis_census_counts_every_rotation() {
        for name in [
            GroupName::T12,
            GroupName::O24,
            GroupName::I60,
            GroupName::Cyclic(6),
            GroupName::Dihedral(5),
            GroupName::Dihedral(4),
        ] {
            let g = RotationGroup::build(name);
            assert_eq!(g.rotation_count_from_axes(), g.order(), "{name}");
        }
    }

    #[test]
    fn tetrahedral_has_two_threefold_classes() {
        let g = RotationGroup::build(GroupName::T12);
        let census: Vec<(usize, usize)> = g.axes().iter().map(|c| (c.order, c.rays.len())).collect();
        assert_eq!(census, vec![(3, 4), (3, 4), (2, 6)]);
    }

    #[test]
    fn icosahedral_census() {
        let g = RotationGroup::build(GroupName::I60);
        let census: Vec<(usize, usize)> = g.axes().iter().map(|c| (c.order, c.rays.len())).collect();
        assert_eq!(census, vec![(5, 12), (3, 20), (2, 30)]);
    }

    #[test]
    fn closure_and_inverses() {
        for name in [GroupName::T12, GroupName::O24, GroupName::I60] {
            let g = RotationGroup::build(name);
            let els = g.elements();
            for a in els {
                assert!((a * a.transpose() - Matrix3::identity()).abs().max() < 1e-12);
                assert!((a.determinant() - 1.0).abs() < 1e-12);
                for b in els {
                    let p = a * b;
                    assert!(els.iter().any(|e| (e - p).abs().max() < 1e-12));
                }
            }
            for i in 0..g.order() {
                assert_eq!(g.compose(i, g.inverse(i)), 0);
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("o24".parse::<GroupName>().unwrap(), GroupName::O24);
        assert_eq!("C3".parse::<GroupName>().unwrap(), GroupName::Cyclic(3));
        assert_eq!("d7".parse::<GroupName>().unwrap(), GroupName::Dihedral(7));
        assert!("q8".parse::<GroupName>().is_err());
        assert!("c0".parse::<GroupName>().is_err());
    }
}
