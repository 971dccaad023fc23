//! Tube frames along the one-skeleton of the tessellation: two sheets cut
//! back to a band along every face edge and joined by half-circle fillets.
//! These are the thick-skeleton surfaces used to start the shrinker solver.

use std::f64::consts::PI;

use super::families::{shell_mesh, Connector, ShellSpec};
use super::retraction::retraction_distance;
use super::scheme::PlatonicScheme;
use super::shell::Resolution;
use super::SweepoutError;
use crate::mesh::TriMesh;

/// Shape parameters of a tube frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameShape {
    /// Radius of the sphere carrying the tube centre lines.
    pub mid_radius: f64,
    /// Tube radius: the sheets sit at `mid_radius ± half_gap`.
    pub half_gap: f64,
    /// Retraction parameter of the curves where the sheets end; close to 1
    /// for thin bands.
    pub tau: f64,
}

/// Mesh a tube frame with edges of length about `edge_length`.
pub fn frame_surface(scheme: &PlatonicScheme, shape: FrameShape, edge_length: f64) -> Result<TriMesh, SweepoutError> {
    let FrameShape { mid_radius: m0, half_gap: w, tau } = shape;
    let face = &scheme.base_face;
    let m = scheme.neck_order();
    let rho = face.inscribed_radius();
    let d_rep = retraction_distance(face, tau, PI / m as f64);
    let bulge = w / m0;
    let ok = edge_length > 0.0 && w > 0.0 && m0 > w && tau > 0.0 && tau < 1.0 && d_rep > 1.05 * bulge;
    if !ok {
        return Err(SweepoutError::InvalidParams(format!(
            "frame shape {shape:?} with edge length {edge_length} is not embedded"
        )));
    }
    let per_sector = ((2.0 * PI * rho * m0 / edge_length) / m as f64).ceil().max(2.0) as usize;
    let res = Resolution {
        rays_per_sector: per_sector,
        sheet_samples: ((rho - d_rep) * m0 / edge_length).ceil().max(2.0) as usize,
        neck_samples: (PI * w / edge_length).ceil().max(4.0) as usize,
    };
    let hole = |phi: f64| retraction_distance(face, tau, phi);
    let inner = |_: f64, _: f64| m0 - w;
    let outer = |_: f64, _: f64| m0 + w;
    let spec = ShellSpec {
        hole: &hole,
        inner: &inner,
        outer: &outer,
        connector: Connector::Fillet(res.neck_samples),
    };
    Ok(shell_mesh(scheme, &res, &spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;
    use crate::sweepout::scheme::SchemeName;
    use crate::symmetry::vertex_set_symmetry_error;

    #[test]
    fn frames_have_expected_genus() {
        let shape = FrameShape {
            mid_radius: 2.0,
            half_gap: 0.4,
            tau: 0.8,
        };
        for name in SchemeName::ALL {
            let scheme = PlatonicScheme::build(name);
            let mesh = frame_surface(&scheme, shape, 0.25).unwrap();
            let report = validate(&mesh, false).unwrap();
            assert_eq!(report.genus as usize, scheme.expected_genus(), "{name}");
            assert!(vertex_set_symmetry_error(mesh.vertices(), &scheme.group) < 1e-12);
        }
    }

    #[test]
    fn rejects_self_overlapping_fillet() {
        let scheme = PlatonicScheme::build(SchemeName::O24Z4);
        let shape = FrameShape {
            mid_radius: 2.0,
            half_gap: 1.5,
            tau: 0.2,
        };
        assert!(frame_surface(&scheme, shape, 0.2).is_err());
    }
}
