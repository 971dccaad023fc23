//! Worked examples of the public operations, checked against oracles
//! computed independently in this file (closed forms, hand counts).

use std::sync::Arc;

use shrinker::gaussian::{gaussian_area, gaussian_area_gradient, GaussKernelConfig};
use shrinker::mesh::primitives::icosphere;
use shrinker::mesh::{validate, vertex_normals, TriMesh, Vec3};
use shrinker::minmax::{saddle_init, verify, width_grid, GridSpec};
use shrinker::sweepout::{
    catenoid_family, catenoid_family_with_parameter, doubled_family, sphere_family, FamilyTag, PlatonicScheme,
    SchemeName, SweepoutConfig,
};
use shrinker::symmetry::{
    orbit, riemann_hurwitz_chi, singular_set_distance, symmetric_sphere, BranchData, GroupName, RotationGroup,
    SymmetryError,
};

fn sphere_area_oracle(r: f64) -> f64 {
    r * r * (-r * r / 4.0).exp()
}

fn octahedral() -> Arc<RotationGroup> {
    Arc::new(RotationGroup::build(GroupName::O24))
}

#[test]
fn doubled_cube_has_euler_characteristic_minus_eight() {
    let scheme = PlatonicScheme::build(SchemeName::O24Z4);
    let slice = doubled_family(&scheme, 0.7, 0.5, &SweepoutConfig::default()).unwrap();
    let report = validate(&slice.mesh, false).unwrap();
    assert_eq!(report.euler_char, -8);
    assert_eq!(report.genus, 5);
    // Genus is one less than the number of cube faces.
    assert_eq!(scheme.expected_genus(), 6 - 1);
}

#[test]
fn sphere_area_is_maximal_at_radius_two() {
    let kernel = GaussKernelConfig::default();
    let unit = icosphere(4, 1.0);
    let samples: Vec<(f64, f64)> = (0..=200)
        .map(|i| {
            let r = 1.9 + 0.001 * i as f64;
            (r, gaussian_area(&unit.map_vertices(|v| v * r), &kernel))
        })
        .collect();
    let (r_max, _) = samples.iter().copied().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    assert!((r_max - 2.0).abs() <= 0.01, "discrete argmax at r={r_max}");
}

#[test]
fn gradient_on_the_shrinking_sphere_vanishes_under_refinement() {
    let kernel = GaussKernelConfig::default();
    // Smooth, non-symmetric normal variation φ ν.
    let phi = |x: &Vec3| 1.0 + x.dot(&Vec3::new(0.3, -0.2, 0.5)) / 2.0 + (x.z / 2.0).powi(2);
    // (max |∂F/∂x_v · ν_v|, |Σ_v φ(x_v) ∂F/∂x_v · ν_v|)
    let normal_parts = |level: usize, radius: f64| {
        let mesh = icosphere(level, radius);
        let grad = gaussian_area_gradient(&mesh, &kernel);
        let normals = vertex_normals(&mesh).unwrap();
        let components: Vec<f64> = (0..mesh.vertex_count()).map(|v| grad[v].dot(&normals[v])).collect();
        let max = components.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let paired: f64 = mesh.vertices().iter().zip(&components).map(|(x, c)| phi(x) * c).sum();
        (max, paired.abs())
    };
    let values: Vec<(f64, f64)> = (2..=5).map(|l| normal_parts(l, 2.0)).collect();
    for w in values.windows(2) {
        assert!(w[1].0 < 0.5 * w[0].0, "normal components did not shrink: {values:?}");
        assert!(w[1].1 < 0.5 * w[0].1, "first variation did not shrink: {values:?}");
    }
    // Away from the critical radius the same first variation stays finite.
    let (_, off_critical) = normal_parts(5, 1.9);
    assert!(values[3].1 < 0.01 * off_critical, "{values:?} vs {off_critical}");
}

#[test]
fn orbits_follow_orbit_stabilizer() {
    let g = octahedral();
    assert_eq!(orbit(&g, &Vec3::new(1.0, 0.0, 0.0)).len(), 6);
    assert_eq!(orbit(&g, &Vec3::zeros()).len(), 1);
    assert_eq!(orbit(&g, &Vec3::new(0.3, 0.71, 0.13)).len(), 24);
    assert_eq!(orbit(&g, &Vec3::new(1.0, 1.0, 1.0)).len(), 8);
    assert_eq!(orbit(&g, &Vec3::new(1.0, 1.0, 0.0)).len(), 12);
    assert_eq!(RotationGroup::build(GroupName::Cyclic(1)).order(), 1);
}

#[test]
fn branched_cover_counts() {
    // 24·2 − Σ (24/m)(m − 1) by hand.
    let none = riemann_hurwitz_chi(24, 2, &BranchData::new([])).unwrap();
    assert_eq!(none, 48);
    let two_fourfold = riemann_hurwitz_chi(24, 2, &BranchData::new([(4, 2)])).unwrap();
    assert_eq!(two_fourfold, 48 - 2 * 6 * 3);
    assert!(matches!(
        riemann_hurwitz_chi(24, 2, &BranchData::new([(5, 1)])),
        Err(SymmetryError::NonDivisible { .. })
    ));
}

#[test]
fn singular_set_distances() {
    let g = octahedral();
    let sphere = symmetric_sphere(&g, 3, 2.0);
    assert!(singular_set_distance(&sphere, &g) < 1e-12);
    // A small triangle whose closest point to any rotation axis is 0.3 from
    // the positive x-axis; the other axes are more than a unit away.
    let p = Vec3::new(3.0, 0.3, 0.0);
    let tri = TriMesh::new(
        vec![p, p + Vec3::new(0.0, 0.05, 0.0), p + Vec3::new(0.0, 0.05, 0.05)],
        vec![[0, 1, 2]],
    );
    assert!((singular_set_distance(&tri, &g) - 0.3).abs() < 1e-12);
}

#[test]
fn doubled_family_identifies_the_cycle_endpoints() {
    let scheme = PlatonicScheme::build(SchemeName::O24Z4);
    let cfg = SweepoutConfig::default();
    for s in [0.2, 0.5, 0.8] {
        let start = doubled_family(&scheme, 0.0, s, &cfg).unwrap().mesh;
        let end = doubled_family(&scheme, 1.0, 1.0 - s, &cfg).unwrap().mesh;
        assert_eq!(start.vertex_count(), end.vertex_count());
        let gap = start
            .vertices()
            .iter()
            .map(|p| end.vertices().iter().map(|q| (p - q).norm()).fold(f64::MAX, f64::min))
            .fold(0.0, f64::max);
        assert!(gap <= 1e-12, "s={s}: vertex sets differ by {gap}");
        let r = (std::f64::consts::FRAC_PI_2 * s).tan();
        assert!(start.vertices().iter().all(|v| (v.norm() - r).abs() < 1e-12));
    }
}

#[test]
fn neck_opening_starts_at_two_offset_spheres() {
    let scheme = PlatonicScheme::build(SchemeName::O24Z4);
    let cfg = SweepoutConfig {
        level: 4,
        ..Default::default()
    };
    let slice = catenoid_family(&scheme, 0.1, -0.1, 0.0, &cfg).unwrap();
    let oracle = sphere_area_oracle(2.1) + sphere_area_oracle(1.9);
    let rel = slice.gaussian_area / oracle - 1.0;
    assert!(rel.abs() <= 1e-3, "F={} oracle={oracle}", slice.gaussian_area);
    assert!(!slice.degenerate);
    let last = catenoid_family(&scheme, 0.1, -0.1, 1.0, &cfg).unwrap();
    assert!(last.degenerate);
    assert!(catenoid_family(&scheme, -0.1, 0.1, 0.5, &cfg).is_err());
}

#[test]
fn parametrised_neck_opening_has_scheme_genus_inside() {
    let scheme = PlatonicScheme::build(SchemeName::O24Z4);
    let cfg = SweepoutConfig::default();
    let eta = 0.1;
    let mid = 0.5 * (-cfg.alpha2 + cfg.alpha2 - eta);
    let slice = catenoid_family_with_parameter(&scheme, mid, 0.5, eta, &cfg).unwrap();
    assert_eq!(validate(&slice.mesh, false).unwrap().genus, 5);
    assert!(catenoid_family_with_parameter(&scheme, mid, 1.0, eta, &cfg).unwrap().degenerate);
}

#[test]
fn sphere_family_reaches_the_shrinking_sphere() {
    let scheme = PlatonicScheme::build(SchemeName::O24Z4);
    let cfg = SweepoutConfig::default();
    let t_star = 2.0 / std::f64::consts::PI * 2.0f64.atan();
    let slice = sphere_family(&scheme.group, t_star, &cfg).unwrap();
    assert!(slice.mesh.vertices().iter().all(|v| (v.norm() - 2.0).abs() < 1e-12));
    assert!(sphere_family(&scheme.group, 1e-6, &cfg).unwrap().degenerate);
}

#[test]
fn sphere_width_converges_under_mesh_refinement() {
    let group = octahedral();
    let widths: Vec<f64> = (2..=5)
        .map(|level| {
            let cfg = SweepoutConfig {
                level,
                ..Default::default()
            };
            width_grid(FamilyTag::Sphere, level, GridSpec::one_parameter(41), |t, _| {
                sphere_family(&group, t, &cfg)
            })
            .unwrap()
            .max_f
        })
        .collect();
    let changes: Vec<f64> = widths.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for c in changes.windows(2) {
        assert!(c[1] <= 2.0 * c[0], "widths {widths:?}");
    }
}

#[test]
fn verify_the_shrinking_sphere() {
    let g = octahedral();
    let kernel = GaussKernelConfig::default();
    let report = verify(&symmetric_sphere(&g, 3, 2.0), &g, &kernel, 1e-6).unwrap();
    assert_eq!(report.genus, 0);
    assert!(report.symmetry_error <= 1e-14);
    assert!(report.residual_linf < 1e-10);
    assert!(report.converged);
    let off = verify(&symmetric_sphere(&g, 3, 1.0), &g, &kernel, 1e-6).unwrap();
    // H − ½⟨x, ν⟩ = 2/r − r/2 at r = 1.
    assert!((off.residual_linf - 1.5).abs() < 0.045);
    assert!(!off.converged);
}

#[test]
fn icosahedral_initial_surface_has_genus_nineteen() {
    let scheme = PlatonicScheme::build(SchemeName::I60Z3);
    assert_eq!(scheme.neck_count(), 20);
    let init = saddle_init(&scheme, 0.3, &GaussKernelConfig::default()).unwrap();
    let report = validate(&init.mesh, false).unwrap();
    assert_eq!((report.genus, report.components), (19, 1));
}
