//! Numerical geometry for Gaussian-weighted surfaces in ℝ³: triangle meshes,
//! Gaussian area and mean curvature, finite rotation groups, equivariant
//! sweepout families, min-max width estimates and a self-shrinker solver.

pub mod gaussian;
pub mod mesh;
pub mod minmax;
pub mod sweepout;
pub mod symmetry;
