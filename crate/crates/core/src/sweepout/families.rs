//! The sweepout families: concentric spheres, doubled spheres joined by
//! necks, and the logarithmic-cutoff neck-opening families.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::cutoff::{CutoffProfile, RadiusMap};
use super::retraction::retraction_distance;
use super::scheme::PlatonicScheme;
use super::shell::{graded_samples, holed_shell, polar_spheres, Resolution};
use super::SweepoutError;
use crate::gaussian::{gaussian_area, GaussKernelConfig};
use crate::mesh::{validate, OrbitTags, TriMesh, TopologyReport};
use crate::symmetry::{symmetric_sphere, RotationGroup};

/// Slices with Gaussian area below this fraction of the shrinking sphere's
/// are flagged degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-6;

/// Smallest angular hole radius that is meshed; smaller holes (including
/// the point-like holes of closed necks) are opened to this radius and
/// bridged by a radial segment of negligible area.
pub const HOLE_FLOOR: f64 = 1e-5;

/// Smallest angular neck radius of the doubled family. Its sheets can be
/// orders of magnitude apart in radius, so the hole is kept large enough
/// that the triangles at the neck stay above the relative degeneracy
/// threshold of the whole slice.
pub const DOUBLED_HOLE_FLOOR: f64 = 2e-3;

/// Sheets of radius outside this range carry (numerically) no Gaussian area
/// and are dropped from neck-free slices or clamped into range otherwise.
pub const MIN_SHEET_RADIUS: f64 = 0.02;
pub const MAX_SHEET_RADIUS: f64 = 9.0;

/// Family parameter of the shrinking sphere: `tan(πT/2) = 2`.
pub fn shrinking_sphere_parameter() -> f64 {
    2.0 * 2f64.atan() / PI
}

/// Gaussian area of the origin-centred sphere of radius `r`: `r² e^{−r²/4}`.
pub fn sphere_gaussian_area(r: f64) -> f64 {
    r * r * (-r * r / 4.0).exp()
}

/// Gaussian area of the shrinking sphere, `4/e`.
pub fn shrinking_sphere_area() -> f64 {
    sphere_gaussian_area(2.0)
}

/// Radius of the sphere at family parameter `t`: `tan(πt/2)`.
pub fn sphere_radius_at(t: f64) -> f64 {
    (0.5 * PI * t).tan()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Sphere,
    Doubled,
    Catenoid,
    CatenoidWithParameter,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::Sphere => "sphere",
            FamilyTag::Doubled => "doubled",
            FamilyTag::Catenoid => "catenoid",
            FamilyTag::CatenoidWithParameter => "catenoid-with-parameter",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = SweepoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            FamilyTag::Sphere,
            FamilyTag::Doubled,
            FamilyTag::Catenoid,
            FamilyTag::CatenoidWithParameter,
        ]
        .into_iter()
        .find(|f| f.to_string().eq_ignore_ascii_case(s))
        .ok_or_else(|| SweepoutError::UnknownFamily(s.to_string()))
    }
}

/// Parameters a slice was generated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceParams {
    Sphere { t: f64 },
    Doubled { t: f64, s: f64 },
    Catenoid { epsilon: f64, delta: f64, t: f64 },
    CatenoidWithParameter { s: f64, t: f64, eta: f64 },
}

impl fmt::Display for SliceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceParams::Sphere { t } => write!(f, "t={t}"),
            SliceParams::Doubled { t, s } => write!(f, "t={t} s={s}"),
            SliceParams::Catenoid { epsilon, delta, t } => {
                write!(f, "epsilon={epsilon} delta={delta} t={t}")
            }
            SliceParams::CatenoidWithParameter { s, t, eta } => write!(f, "s={s} t={t} eta={eta}"),
        }
    }
}

/// One member of a sweepout family.
#[derive(Debug, Clone)]
pub struct SweepoutSlice {
    /// The surface; empty for slices that have collapsed to a graph or a
    /// point.
    pub mesh: TriMesh,
    pub params: SliceParams,
    pub family: FamilyTag,
    /// Set when the Gaussian area is below `DEGENERATE_AREA_RATIO · 4/e`.
    pub degenerate: bool,
    pub gaussian_area: f64,
}

impl SweepoutSlice {
    fn from_mesh(mesh: Option<TriMesh>, params: SliceParams, family: FamilyTag, cfg: &SweepoutConfig) -> Self {
        let mesh = mesh.unwrap_or_else(|| TriMesh::new(Vec::new(), Vec::new()));
        let gaussian_area = if mesh.triangle_count() == 0 {
            0.0
        } else {
            gaussian_area(&mesh, &cfg.kernel)
        };
        Self {
            degenerate: gaussian_area < DEGENERATE_AREA_RATIO * shrinking_sphere_area(),
            mesh,
            params,
            family,
            gaussian_area,
        }
    }

    /// Topology of the slice, or `None` for degenerate slices.
    pub fn topology(&self) -> Option<Result<TopologyReport, SweepoutError>> {
        (!self.degenerate).then(|| validate(&self.mesh, false).map_err(SweepoutError::from))
    }

    /// The slice mesh with vertex orbit tags for `group`.
    pub fn tagged_mesh(&self, group: &Arc<RotationGroup>) -> Result<TriMesh, SweepoutError> {
        tag_orbits(&self.mesh, group)
    }
}

/// Attach orbit tags for `group` to an equivariant mesh.
pub fn tag_orbits(mesh: &TriMesh, group: &Arc<RotationGroup>) -> Result<TriMesh, SweepoutError> {
    let scale = mesh.bounding_box_diagonal().max(1.0);
    let tags = OrbitTags::from_positions(mesh.vertices(), group.clone(), 1e-9 * scale)?;
    Ok(mesh.clone().with_orbit_tags(Arc::new(tags)))
}

/// Construction knobs shared by all families.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepoutConfig {
    /// Mesh resolution level (doubling per level).
    pub level: usize,
    /// Width of the strip near `s = 0` handled by the neck-opening family.
    pub epsilon1: f64,
    /// Peak value of the neck-size bump.
    pub amplitude: f64,
    /// Largest admissible sheet offset for the neck-opening family.
    pub alpha: f64,
    /// Half-width of the admissible `s` range of the parametrised
    /// neck-opening family.
    pub alpha2: f64,
    pub kernel: GaussKernelConfig,
}

impl Default for SweepoutConfig {
    fn default() -> Self {
        Self {
            level: 3,
            epsilon1: 0.05,
            amplitude: 0.02,
            alpha: 0.25,
            alpha2: 0.3,
            kernel: GaussKernelConfig::default(),
        }
    }
}

impl SweepoutConfig {
    pub fn resolution(&self) -> Resolution {
        Resolution::from_level(self.level)
    }

    fn validate(&self) -> Result<(), SweepoutError> {
        let ok = self.epsilon1 > 0.0
            && self.epsilon1 < 1.0
            && self.amplitude > 0.0
            && self.amplitude <= 1.0
            && self.alpha > 0.0
            && self.alpha2 > 0.0;
        if ok {
            Ok(())
        } else {
            Err(SweepoutError::InvalidParams(format!("invalid sweepout configuration {self:?}")))
        }
    }
}

fn check_unit(name: &str, x: f64) -> Result<(), SweepoutError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(SweepoutError::InvalidParams(format!("{name}={x} outside [0, 1]")))
    }
}

/// Origin-centred sphere of radius `tan(πt/2)`, orbit-tagged for `group`.
/// The endpoints `t = 0` and `t = 1` give empty degenerate slices.
pub fn sphere_family(
    group: &Arc<RotationGroup>,
    t: f64,
    cfg: &SweepoutConfig,
) -> Result<SweepoutSlice, SweepoutError> {
    check_unit("t", t)?;
    let r = sphere_radius_at(t);
    let mesh = (t > 0.0 && t < 1.0 && r.is_finite()).then(|| symmetric_sphere(group, cfg.level, r));
    Ok(SweepoutSlice::from_mesh(mesh, SliceParams::Sphere { t }, FamilyTag::Sphere, cfg))
}

/// Concentric spheres of the given radii meshed with the same face-polar
/// layout as the doubled slices (inner spheres wound inwards); the
/// same-resolution reference for areas of doubled slices.
pub fn concentric_spheres(scheme: &PlatonicScheme, radii: &[f64], cfg: &SweepoutConfig) -> TriMesh {
    let largest = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spheres: Vec<(f64, bool)> = radii.iter().map(|&r| (r, r == largest)).collect();
    polar_spheres(scheme, &cfg.resolution(), &spheres)
}

/// Neck-size bump: `amplitude · sin(πt) · sin(π(s − ε₁)/(1 − ε₁))`, clamped
/// to `[0, 1]`; zero on `t ∈ {0, 1}`, on `s = ε₁`, on `s = 1` and below
/// `ε₁`.
pub fn bump_eta(t: f64, s: f64, epsilon1: f64, amplitude: f64) -> f64 {
    if s <= epsilon1 || s >= 1.0 || t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let v = amplitude * (PI * t).sin() * (PI * (s - epsilon1) / (1.0 - epsilon1)).sin();
    v.clamp(0.0, 1.0)
}

/// How the two sheets are joined at the hole boundary.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Connector {
    /// The sheets end on the same circle.
    Meet,
    /// A radial segment with the given number of intervals.
    Radial(usize),
    /// A half-circle in the `(d, r)` half-plane bulging into the hole, with
    /// the given number of intervals.
    Fillet(usize),
}

/// Two sheets over every face, cut at angular distance `hole(φ)` from the
/// neck ray and joined there.
pub(crate) struct ShellSpec<'a> {
    pub hole: &'a dyn Fn(f64) -> f64,
    /// Sheet radius as a function of `(d, hole)`.
    pub inner: &'a dyn Fn(f64, f64) -> f64,
    pub outer: &'a dyn Fn(f64, f64) -> f64,
    pub connector: Connector,
}

pub(crate) fn shell_mesh(scheme: &PlatonicScheme, res: &Resolution, spec: &ShellSpec<'_>) -> TriMesh {
    let face = &scheme.base_face;
    let m = scheme.neck_order();
    let phi_rep = PI / m as f64;
    let kappa = 2.0 * PI / (m * res.rays_per_sector) as f64;
    let psi = graded_samples((spec.hole)(phi_rep), face.inscribed_radius(), res.sheet_samples, kappa);
    holed_shell(scheme, res, |phi, b| {
        let d0 = (spec.hole)(phi);
        let at = |x: f64| if x >= 1.0 { b } else { d0 + (b - d0) * x };
        let mut out: Vec<(f64, f64)> = psi
            .iter()
            .rev()
            .map(|&x| {
                let d = at(x);
                (d, (spec.inner)(d, d0))
            })
            .collect();
        let (r_in, r_out) = ((spec.inner)(d0, d0), (spec.outer)(d0, d0));
        let skip = match spec.connector {
            Connector::Meet => 1,
            Connector::Radial(n) => {
                let n = n.max(1);
                out.extend((1..n).map(|i| (d0, r_in * (r_out / r_in).powf(i as f64 / n as f64))));
                0
            }
            Connector::Fillet(n) => {
                let n = n.max(2);
                let (mid, half) = (0.5 * (r_in + r_out), 0.5 * (r_out - r_in));
                out.extend((1..n).map(|i| {
                    let theta = -0.5 * PI + PI * i as f64 / n as f64;
                    (d0 - half / mid * theta.cos(), mid + half * theta.sin())
                }));
                0
            }
        };
        out.extend(psi[skip..].iter().map(|&x| {
            let d = at(x);
            (d, (spec.outer)(d, d0))
        }));
        out
    })
}

/// The doubled-sphere family on `[0, 1]²`: sheets at parameters
/// `a = t(1 − s)` and `b = t + s(1 − t)`, joined by radial necks over the
/// retraction curves at `η(t, s)`. For `s < ε₁` the strip is filled by the
/// neck-opening family between the sheets at `s = ε₁`, run with parameter
/// `(ε₁ − s)/ε₁`, which closes the necks at `s = ε₁` and ends at the graph
/// over the tessellation's one-skeleton at `s = 0`.
pub fn doubled_family(
    scheme: &PlatonicScheme,
    t: f64,
    s: f64,
    cfg: &SweepoutConfig,
) -> Result<SweepoutSlice, SweepoutError> {
    check_unit("t", t)?;
    check_unit("s", s)?;
    cfg.validate()?;
    let params = SliceParams::Doubled { t, s };
    let e1 = cfg.epsilon1;
    if s < e1 {
        let ra = clamp_radius(sphere_radius_at(t * (1.0 - e1)));
        let rb = clamp_radius(sphere_radius_at(t + e1 * (1.0 - t)));
        let mesh = neck_opening_mesh(scheme, ra, rb, (e1 - s) / e1, cfg);
        return Ok(SweepoutSlice::from_mesh(mesh, params, FamilyTag::Doubled, cfg));
    }
    let ra = sphere_radius_at(t * (1.0 - s));
    let rb = sphere_radius_at(t + s * (1.0 - t));
    let eta = bump_eta(t, s, e1, cfg.amplitude);
    let res = cfg.resolution();
    let mesh = if eta <= 0.0 {
        let in_range = |r: f64| (MIN_SHEET_RADIUS..=MAX_SHEET_RADIUS).contains(&r);
        let spheres: Vec<(f64, bool)> = [(ra, false), (rb, true)]
            .into_iter()
            .filter(|&(r, _)| in_range(r))
            .collect();
        (!spheres.is_empty()).then(|| polar_spheres(scheme, &res, &spheres))
    } else {
        let (ra, rb) = (clamp_radius(ra), clamp_radius(rb));
        let face = &scheme.base_face;
        let hole = |phi: f64| retraction_distance(face, eta, phi).max(DOUBLED_HOLE_FLOOR);
        let inner = |_: f64, _: f64| ra;
        let outer = |_: f64, _: f64| rb;
        let spec = ShellSpec {
            hole: &hole,
            inner: &inner,
            outer: &outer,
            connector: Connector::Radial(res.neck_samples),
        };
        Some(shell_mesh(scheme, &res, &spec))
    };
    Ok(SweepoutSlice::from_mesh(mesh, params, FamilyTag::Doubled, cfg))
}

fn clamp_radius(r: f64) -> f64 {
    if r.is_finite() {
        r.clamp(MIN_SHEET_RADIUS, MAX_SHEET_RADIUS)
    } else {
        MAX_SHEET_RADIUS
    }
}

/// Cutoff radius around each neck point for the neck-opening family; it
/// shrinks with the neck count so the logarithmic cutoff stays cheap.
pub fn neck_cutoff_radius(neck_count: usize) -> f64 {
    0.1f64.min((-(neck_count as f64) / 2.0).exp())
}

/// The neck-opening family between concentric sheets of radii `ra`, `rb`
/// at parameter `p ∈ [0, 1]`.
///
/// Both sheets are bent towards `m₀` (the radius in `[ra, rb]` closest to
/// the shrinking sphere) by the logarithmic cutoff. In the first half the
/// cutoff radius grows from 0 to `R`, opening necks of radius `R²` around
/// every neck ray. In the second half the holes follow the retraction
/// curves out to the face boundaries while the offsets decay to zero, so
/// the slice at `p = 1` is the graph over the one-skeleton (returned as
/// `None`).
fn neck_opening_mesh(scheme: &PlatonicScheme, ra: f64, rb: f64, p: f64, cfg: &SweepoutConfig) -> Option<TriMesh> {
    let res = cfg.resolution();
    let (lo, hi) = (ra.min(rb), ra.max(rb));
    if hi - lo <= 1e-12 * hi {
        // Coincident sheets (both clamped to the same radius) carry no
        // surface of their own.
        return None;
    }
    let m0 = 2f64.clamp(lo, hi);
    let big_r = neck_cutoff_radius(scheme.neck_count());
    let face = &scheme.base_face;
    let meet_tol = 1e-12 * hi;
    if p <= 0.5 {
        let tc = 2.0 * p * big_r;
        let cutoff = CutoffProfile::new(tc).ok();
        let eta = move |d: f64| cutoff.map_or(1.0, |c| c.eval(d));
        let d0 = (tc * tc).max(HOLE_FLOOR);
        let hole = |_: f64| d0;
        let inner = |d: f64, _: f64| m0 + (ra - m0) * eta(d);
        let outer = |d: f64, _: f64| m0 + (rb - m0) * eta(d);
        let connector = if (inner(d0, d0) - outer(d0, d0)).abs() <= meet_tol {
            Connector::Meet
        } else {
            Connector::Radial(res.neck_samples)
        };
        let spec = ShellSpec {
            hole: &hole,
            inner: &inner,
            outer: &outer,
            connector,
        };
        return Some(shell_mesh(scheme, &res, &spec));
    }
    let q = 2.0 * p - 1.0;
    if q >= 1.0 {
        return None;
    }
    let cutoff = CutoffProfile::new(big_r).expect("cutoff radius lies in (0, 1)");
    let r2 = big_r * big_r;
    let tau0 = r2.max(HOLE_FLOOR) / face.inscribed_radius();
    let tau = tau0 + (1.0 - tau0) * q;
    let decay = (1.0 - q) * (1.0 - q);
    let hole = |phi: f64| retraction_distance(face, tau, phi);
    let inner = |d: f64, d0: f64| m0 + decay * (ra - m0) * cutoff.eval(r2 * d / d0);
    let outer = |d: f64, d0: f64| m0 + decay * (rb - m0) * cutoff.eval(r2 * d / d0);
    let spec = ShellSpec {
        hole: &hole,
        inner: &inner,
        outer: &outer,
        connector: Connector::Meet,
    };
    Some(shell_mesh(scheme, &res, &spec))
}

/// Neck-opening sweepout of the pair of spheres at normal offsets `δ < ε`
/// from the shrinking sphere (radii `2 + δ` and `2 + ε`), at `t ∈ [0, 1]`.
/// With opposite signs both sheets are bent onto the shrinking sphere near
/// the necks; with equal signs only the outer sheet is bent (onto the inner
/// one).
pub fn catenoid_family(
    scheme: &PlatonicScheme,
    epsilon: f64,
    delta: f64,
    t: f64,
    cfg: &SweepoutConfig,
) -> Result<SweepoutSlice, SweepoutError> {
    check_unit("t", t)?;
    if epsilon <= delta {
        return Err(SweepoutError::InvalidParams(format!(
            "need epsilon > delta, got epsilon={epsilon}, delta={delta}"
        )));
    }
    if epsilon.abs() > cfg.alpha || delta.abs() > cfg.alpha {
        return Err(SweepoutError::InvalidParams(format!(
            "offsets must not exceed alpha={} in magnitude, got epsilon={epsilon}, delta={delta}",
            cfg.alpha
        )));
    }
    let mesh = neck_opening_mesh(scheme, 2.0 + delta, 2.0 + epsilon, t, cfg);
    Ok(SweepoutSlice::from_mesh(
        mesh,
        SliceParams::Catenoid { epsilon, delta, t },
        FamilyTag::Catenoid,
        cfg,
    ))
}

/// The sheet-radius map `f(x) = tan(π/2 · (T(1 − ε₁) + x(1 − ε₁)))` of the
/// parametrised neck-opening family, with `T` the shrinking-sphere
/// parameter.
pub fn parameter_radius_map(cfg: &SweepoutConfig) -> RadiusMap {
    RadiusMap {
        base: shrinking_sphere_parameter() * (1.0 - cfg.epsilon1),
        scale: 1.0 - cfg.epsilon1,
    }
}

/// Neck-opening sweepout between the sheets of radii `f(s)` and `f(s + η)`
/// (see [`parameter_radius_map`]), for `s ∈ [−α₂, α₂ − η]`, `t ∈ [0, 1]`.
pub fn catenoid_family_with_parameter(
    scheme: &PlatonicScheme,
    s: f64,
    t: f64,
    eta: f64,
    cfg: &SweepoutConfig,
) -> Result<SweepoutSlice, SweepoutError> {
    check_unit("t", t)?;
    if !(eta > 0.0 && s >= -cfg.alpha2 && s <= cfg.alpha2 - eta) {
        return Err(SweepoutError::InvalidParams(format!(
            "need eta > 0 and s in [-{a}, {a} - eta], got s={s}, eta={eta}",
            a = cfg.alpha2
        )));
    }
    let f = parameter_radius_map(cfg);
    let mesh = neck_opening_mesh(scheme, f.eval(s), f.eval(s + eta), t, cfg);
    Ok(SweepoutSlice::from_mesh(
        mesh,
        SliceParams::CatenoidWithParameter { s, t, eta },
        FamilyTag::CatenoidWithParameter,
        cfg,
    ))
}
