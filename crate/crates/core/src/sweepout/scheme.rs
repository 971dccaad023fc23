use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::SweepoutError;
use crate::mesh::Vec3;
use crate::symmetry::{GroupName, RotationGroup};

/// The five doubled-Platonic configurations: a polyhedral group, the
/// isotropy class whose rays carry the necks, and the resulting genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeName {
    /// Tetrahedral group, necks on one class of three-fold rays (4 necks).
    T12Z3,
    /// Octahedral group, necks on the four-fold rays (6 necks, cube faces).
    O24Z4,
    /// Octahedral group, necks on the three-fold rays (8 necks).
    O24Z3,
    /// Icosahedral group, necks on the five-fold rays (12 necks).
    I60Z5,
    /// Icosahedral group, necks on the three-fold rays (20 necks).
    I60Z3,
}

impl SchemeName {
    pub const ALL: [SchemeName; 5] = [
        SchemeName::T12Z3,
        SchemeName::O24Z4,
        SchemeName::O24Z3,
        SchemeName::I60Z5,
        SchemeName::I60Z3,
    ];

    pub fn group_name(self) -> GroupName {
        match self {
            SchemeName::T12Z3 => GroupName::T12,
            SchemeName::O24Z4 | SchemeName::O24Z3 => GroupName::O24,
            SchemeName::I60Z5 | SchemeName::I60Z3 => GroupName::I60,
        }
    }

    pub fn neck_order(self) -> usize {
        match self {
            SchemeName::T12Z3 | SchemeName::O24Z3 | SchemeName::I60Z3 => 3,
            SchemeName::O24Z4 => 4,
            SchemeName::I60Z5 => 5,
        }
    }
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeName::T12Z3 => "t12-z3",
            SchemeName::O24Z4 => "o24-z4",
            SchemeName::O24Z3 => "o24-z3",
            SchemeName::I60Z5 => "i60-z5",
            SchemeName::I60Z3 => "i60-z3",
        })
    }
}

impl FromStr for SchemeName {
    type Err = SweepoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeName::ALL
            .into_iter()
            .find(|n| n.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| SweepoutError::UnknownScheme(s.to_string()))
    }
}

/// One face of the spherical tessellation dual to the neck rays: centred on
/// a neck ray, bounded by great-circle arcs between its corner rays.
#[derive(Debug, Clone)]
pub struct Face {
    pub center: Vec3,
    /// Tangent frame at the centre; the first corner lies along `e1`.
    pub e1: Vec3,
    pub e2: Vec3,
    /// Corner rays in counter-clockwise order around the centre.
    pub corners: Vec<Vec3>,
    /// Great-circle planes of the edges, normals pointing towards the centre.
    edge_normals: Vec<Vec3>,
}

impl Face {
    /// Unit tangent direction at polar angle `phi`.
    pub fn direction(&self, phi: f64) -> Vec3 {
        phi.cos() * self.e1 + phi.sin() * self.e2
    }

    /// Point on the unit sphere at angular distance `d` from the centre in
    /// direction `phi`.
    pub fn point(&self, d: f64, phi: f64) -> Vec3 {
        d.cos() * self.center + d.sin() * self.direction(phi)
    }

    /// Angular distance from the centre to the face boundary along `phi`.
    pub fn boundary_distance(&self, phi: f64) -> f64 {
        let m = self.corners.len();
        let sector = 2.0 * PI / m as f64;
        let j = ((phi.rem_euclid(2.0 * PI) / sector).floor() as usize).min(m - 1);
        let n = &self.edge_normals[j];
        let dir = self.direction(phi);
        n.dot(&self.center).atan2(-n.dot(&dir))
    }

    /// Geodesic radius of the inscribed circle (distance to edge midpoints).
    pub fn inscribed_radius(&self) -> f64 {
        self.boundary_distance(PI / self.corners.len() as f64)
    }

    /// Geodesic distance from the centre to a corner.
    pub fn circumradius(&self) -> f64 {
        self.center.dot(&self.corners[0]).clamp(-1.0, 1.0).acos()
    }
}

/// A doubled-Platonic configuration with its tessellation geometry.
#[derive(Debug, Clone)]
pub struct PlatonicScheme {
    pub name: SchemeName,
    pub group: Arc<RotationGroup>,
    /// Neck rays, one per face.
    pub neck_points: Vec<Vec3>,
    /// Rays at the tessellation vertices.
    pub corner_points: Vec<Vec3>,
    /// Face centred on `neck_points[0]`.
    pub base_face: Face,
    /// For every face `f`, a group element taking the base face onto it.
    pub face_elements: Vec<usize>,
}

impl PlatonicScheme {
    pub fn build(name: SchemeName) -> Self {
        let group = Arc::new(RotationGroup::build(name.group_name()));
        let m = name.neck_order();
        let classes = group.axis_classes(m);
        let neck_points = classes[0].rays.clone();
        // The corners are the other class of non-two-fold rays.
        let corner_points = group
            .axes()
            .iter()
            .filter(|c| c.order > 2 && c.rays != neck_points)
            .map(|c| c.rays.clone())
            .next()
            .expect("polyhedral groups have two non-two-fold classes");
        let c0 = neck_points[0];
        let mut near: Vec<Vec3> = corner_points.clone();
        near.sort_by(|a, b| b.dot(&c0).total_cmp(&a.dot(&c0)));
        near.truncate(m);
        let tangent = |p: &Vec3| (p - p.dot(&c0) * c0).normalize();
        let e1 = tangent(&near[0]);
        let e2 = c0.cross(&e1);
        let angle = |p: &Vec3| {
            let t = tangent(p);
            t.dot(&e2).atan2(t.dot(&e1)).rem_euclid(2.0 * PI)
        };
        near.sort_by(|a, b| {
            let (aa, ab) = (angle(a), angle(b));
            // The first corner sits at angle 0 (possibly rounded to 2π).
            let fix = |x: f64| if x > 2.0 * PI - 1e-9 { 0.0 } else { x };
            fix(aa).total_cmp(&fix(ab))
        });
        let edge_normals = (0..m)
            .map(|j| {
                let n = near[j].cross(&near[(j + 1) % m]).normalize();
                if n.dot(&c0) < 0.0 {
                    -n
                } else {
                    n
                }
            })
            .collect();
        let base_face = Face {
            center: c0,
            e1,
            e2,
            corners: near,
            edge_normals,
        };
        let face_elements = neck_points
            .iter()
            .map(|c| {
                (0..group.order())
                    .find(|&g| (group.element(g) * c0 - c).norm() < 1e-9)
                    .expect("neck rays form one orbit")
            })
            .collect();
        Self {
            name,
            group,
            neck_points,
            corner_points,
            base_face,
            face_elements,
        }
    }

    pub fn neck_count(&self) -> usize {
        self.neck_points.len()
    }

    pub fn neck_order(&self) -> usize {
        self.name.neck_order()
    }

    /// Genus of two spheres joined by one neck per face.
    pub fn expected_genus(&self) -> usize {
        self.neck_count() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neck_counts_and_genus() {
        let expect = [(4, 3), (6, 5), (8, 7), (12, 11), (20, 19)];
        for (name, (k, g)) in SchemeName::ALL.into_iter().zip(expect) {
            let s = PlatonicScheme::build(name);
            assert_eq!(s.neck_count(), k, "{name}");
            assert_eq!(s.expected_genus(), g, "{name}");
            assert_eq!(s.base_face.corners.len(), s.neck_order());
        }
    }

    #[test]
    fn cube_faces_sit_on_coordinate_axes() {
        let s = PlatonicScheme::build(SchemeName::O24Z4);
        for p in &s.neck_points {
            assert_eq!(p.iter().filter(|x| (x.abs() - 1.0).abs() < 1e-12).count(), 1);
        }
        let face = &s.base_face;
        // Cube face: inscribed radius π/4, circumradius arctan √2.
        assert!((face.inscribed_radius() - PI / 4.0).abs() < 1e-12);
        assert!((face.circumradius() - 2f64.sqrt().atan()).abs() < 1e-12);
        assert!((face.boundary_distance(0.0) - face.circumradius()).abs() < 1e-12);
    }

    #[test]
    fn corners_are_evenly_spaced() {
        for name in SchemeName::ALL {
            let s = PlatonicScheme::build(name);
            let f = &s.base_face;
            let m = f.corners.len();
            for (j, c) in f.corners.iter().enumerate() {
                let phi = 2.0 * PI * j as f64 / m as f64;
                let expected = f.point(f.circumradius(), phi);
                assert!((expected - c).norm() < 1e-12, "{name} corner {j}");
                assert!((f.boundary_distance(phi) - f.circumradius()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for name in SchemeName::ALL {
            assert_eq!(name.to_string().parse::<SchemeName>().unwrap(), name);
        }
        assert!("cube".parse::<SchemeName>().is_err());
    }
}
