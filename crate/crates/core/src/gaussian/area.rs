use std::f64::consts::PI;

use rayon::prelude::*;

use super::GaussKernelConfig;
use crate::mesh::{TriMesh, Vec3};

const CENTROID: [([f64; 3], f64); 1] = [([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1.0)];

const THREE_POINT: [([f64; 3], f64); 3] = [
    ([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0], 1.0 / 3.0),
];

// Symmetric six-point rule, exact for polynomials of degree 4.
const A6: f64 = 0.445_948_490_915_965;
const B6: f64 = 0.091_576_213_509_771;
const WA6: f64 = 0.223_381_589_678_011;
const WB6: f64 = 0.109_951_743_655_322;
const SIX_POINT: [([f64; 3], f64); 6] = [
    ([A6, A6, 1.0 - 2.0 * A6], WA6),
    ([A6, 1.0 - 2.0 * A6, A6], WA6),
    ([1.0 - 2.0 * A6, A6, A6], WA6),
    ([B6, B6, 1.0 - 2.0 * B6], WB6),
    ([B6, 1.0 - 2.0 * B6, B6], WB6),
    ([1.0 - 2.0 * B6, B6, B6], WB6),
];

pub(crate) fn quadrature_rule(order: usize) -> &'static [([f64; 3], f64)] {
    match order {
        1 => &CENTROID,
        3 => &THREE_POINT,
        6 => &SIX_POINT,
        _ => panic!("unsupported quadrature order {order}"),
    }
}

/// `e^{−|x|²/4}`.
pub fn gaussian_weight(x: &Vec3) -> f64 {
    (-0.25 * x.norm_squared()).exp()
}

/// Contribution of one triangle to `F`, including the `1/4π` factor.
pub fn triangle_gaussian_area(p: [&Vec3; 3], cfg: &GaussKernelConfig) -> f64 {
    let area = 0.5 * (p[1] - p[0]).cross(&(p[2] - p[0])).norm();
    let mean: f64 = cfg
        .rule()
        .iter()
        .map(|(l, w)| w * gaussian_weight(&(l[0] * p[0] + l[1] * p[1] + l[2] * p[2])))
        .sum();
    area * mean / (4.0 * PI)
}

/// Discrete Gaussian area. Per-triangle terms are computed in parallel and
/// summed in triangle order, so the result is deterministic.
pub fn gaussian_area(mesh: &TriMesh, cfg: &GaussKernelConfig) -> f64 {
    let v = mesh.vertices();
    let terms: Vec<f64> = mesh
        .triangles()
        .par_iter()
        .map(|&[a, b, c]| triangle_gaussian_area([&v[a], &v[b], &v[c]], cfg))
        .collect();
    terms.iter().sum()
}

/// Exact gradient of [`gaussian_area`] with respect to every vertex,
/// differentiating both the triangle areas and the weights at the
/// quadrature points.
pub fn gaussian_area_gradient(mesh: &TriMesh, cfg: &GaussKernelConfig) -> Vec<Vec3> {
    let v = mesh.vertices();
    let rule = cfg.rule();
    let per_triangle: Vec<[Vec3; 3]> = mesh
        .triangles()
        .par_iter()
        .map(|&[a, b, c]| {
            let p = [v[a], v[b], v[c]];
            let cross = (p[1] - p[0]).cross(&(p[2] - p[0]));
            let twice_area = cross.norm();
            let mut g = [Vec3::zeros(); 3];
            if twice_area == 0.0 {
                return g;
            }
            let n = cross / twice_area;
            let area = 0.5 * twice_area;
            let mut mean = 0.0;
            for (l, w) in rule {
                let x = l[0] * p[0] + l[1] * p[1] + l[2] * p[2];
                let e = w * gaussian_weight(&x);
                mean += e;
                // d/dp_j of e^{−|x|²/4} is e · (−x/2) · λ_j.
                for j in 0..3 {
                    g[j] -= (area * e * 0.5 * l[j]) * x;
                }
            }
            for j in 0..3 {
                let (k, i) = ((j + 1) % 3, (j + 2) % 3);
                g[j] += mean * 0.5 * n.cross(&(p[i] - p[k]));
                g[j] /= 4.0 * PI;
            }
            g
        })
        .collect();
    let mut grad = vec![Vec3::zeros(); v.len()];
    for (tri, g) in mesh.triangles().iter().zip(&per_triangle) {
        for j in 0..3 {
            grad[tri[j]] += g[j];
        }
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::primitives;

    #[test]
    fn rules_integrate_polynomials() {
        // ∫ over the reference triangle of λ₀^a λ₁^b = a! b! / (a+b+2)! · 2 · area.
        for (order, degree) in [(1usize, 1usize), (3, 2), (6, 4)] {
            let rule = quadrature_rule(order);
            let total: f64 = rule.iter().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-14);
            let fact = |n: usize| (1..=n).product::<usize>() as f64;
            for a in 0..=degree {
                for b in 0..=(degree - a) {
                    let approx: f64 = rule.iter().map(|(l, w)| w * l[0].powi(a as i32) * l[1].powi(b as i32)).sum();
                    let exact = 2.0 * fact(a) * fact(b) / fact(a + b + 2);
                    assert!((approx - exact).abs() < 1e-12, "order {order} a {a} b {b}");
                }
            }
        }
    }

    #[test]
    fn far_away_mesh_has_vanishing_gradient() {
        let mesh = primitives::icosphere(1, 1.0).map_vertices(|p| p + Vec3::new(40.0, 0.0, 0.0));
        let g = gaussian_area_gradient(&mesh, &GaussKernelConfig::default());
        assert!(g.iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn unit_sphere_area() {
        let mesh = primitives::icosphere(4, 1.0);
        let f = gaussian_area(&mesh, &GaussKernelConfig::default());
        assert!((f / (-0.25f64).exp() - 1.0).abs() < 5e-3);
    }
}
