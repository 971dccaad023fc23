//! Retraction curves: one closed curve per neck ray, growing from the neck
//! point at `τ = 0` to the boundary of its tessellation face at `τ = 1`.

use super::scheme::{Face, PlatonicScheme};
use crate::mesh::Vec3;

/// Exponent controlling how late the curves bend from circles towards the
/// face polygon.
const POLYGON_BLEND_POWER: i32 = 4;

/// Angular distance from the face centre to the retraction curve at
/// parameter `tau` in direction `phi`:
/// `τ[(1 − τ⁴)ρ + τ⁴B(φ)]` with `ρ` the inscribed radius and `B` the
/// distance to the face boundary. Nearly circular for small `τ`, strictly
/// increasing in `τ`, and equal to the face boundary at `τ = 1`.
pub fn retraction_distance(face: &Face, tau: f64, phi: f64) -> f64 {
    let tau = tau.clamp(0.0, 1.0);
    let blend = tau.powi(POLYGON_BLEND_POWER);
    let rho = face.inscribed_radius();
    tau * ((1.0 - blend) * rho + blend * face.boundary_distance(phi))
}

/// The curves at parameter `tau`, one closed polyline per neck ray on the
/// unit sphere, each with `scheme.neck_order() · samples_per_sector` points.
/// At `τ = 0` every polyline collapses onto its neck point.
pub fn retraction_curves(scheme: &PlatonicScheme, tau: f64, samples_per_sector: usize) -> Vec<Vec<Vec3>> {
    let face = &scheme.base_face;
    let n = scheme.neck_order() * samples_per_sector.max(1);
    let base: Vec<Vec3> = (0..n)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            face.point(retraction_distance(face, tau, phi), phi)
        })
        .collect();
    scheme
        .face_elements
        .iter()
        .map(|&g| {
            let m = scheme.group.element(g);
            base.iter().map(|p| m * p).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweepout::scheme::SchemeName;
    use crate::symmetry::vertex_set_symmetry_error;

    #[test]
    fn point_curves_at_zero() {
        let s = PlatonicScheme::build(SchemeName::O24Z4);
        let curves = retraction_curves(&s, 0.0, 4);
        assert_eq!(curves.len(), 6);
        for c in &curves {
            let p = c[0];
            assert!(c.iter().all(|q| (q - p).norm() < 1e-15));
            assert!((p.abs().max() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn distance_is_monotone_and_reaches_boundary() {
        for name in SchemeName::ALL {
            let s = PlatonicScheme::build(name);
            let f = &s.base_face;
            for j in 0..24 {
                let phi = j as f64 * 0.27;
                let mut prev = 0.0;
                for i in 1..=100 {
                    let d = retraction_distance(f, i as f64 / 100.0, phi);
                    assert!(d > prev);
                    prev = d;
                }
                assert!((prev - f.boundary_distance(phi)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn curves_are_invariant() {
        for name in SchemeName::ALL {
            let s = PlatonicScheme::build(name);
            for tau in [0.3, 0.9, 1.0] {
                let pts: Vec<Vec3> = retraction_curves(&s, tau, 4).concat();
                assert!(vertex_set_symmetry_error(&pts, &s.group) < 1e-12, "{name} {tau}");
            }
        }
    }
}
