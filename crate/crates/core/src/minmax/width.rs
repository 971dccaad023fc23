use std::fmt::{self, Write as _};
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::sweepout::{
    catenoid_family, shrinking_sphere_area, FamilyTag, PlatonicScheme, SweepoutConfig, SweepoutError, SweepoutSlice,
};

/// Header row of the per-slice CSV dump.
pub const GRID_CSV_HEADER: &str = "t,s,F,genus,degenerate";

/// Sampling of a one- or two-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nt: usize,
    /// Number of `s` samples; `None` for one-parameter families.
    pub ns: Option<usize>,
    /// Compute the genus of every non-degenerate slice (slow on large grids).
    pub topology: bool,
}

impl GridSpec {
    pub fn one_parameter(nt: usize) -> Self {
        Self { nt, ns: None, topology: false }
    }

    pub fn two_parameter(nt: usize, ns: usize) -> Self {
        Self { nt, ns: Some(ns), topology: false }
    }

    pub fn with_topology(mut self, topology: bool) -> Self {
        self.topology = topology;
        self
    }

    /// Grids with fewer than two samples along a parameter cannot resolve
    /// the maximum.
    pub fn is_low_resolution(&self) -> bool {
        self.nt < 2 || self.ns.is_some_and(|n| n < 2)
    }

    pub fn sample_count(&self) -> usize {
        self.nt * self.ns.unwrap_or(1)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ns {
            Some(ns) => write!(f, "{}x{}", self.nt, ns),
            None => write!(f, "{}", self.nt),
        }
    }
}

/// Uniform samples of `[0, 1]` including both endpoints; a single sample
/// sits at the midpoint.
pub fn grid_points(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// Gaussian area and diagnostics of one grid slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSample {
    pub t: f64,
    /// `None` for one-parameter families.
    pub s: Option<f64>,
    pub f: f64,
    /// Genus, when topology was requested and the slice is not degenerate.
    pub genus: Option<i64>,
    pub degenerate: bool,
}

/// Upper bound for the width of a family's class: the largest Gaussian
/// area over the sampled slices.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthEstimate {
    pub family: FamilyTag,
    pub grid: GridSpec,
    /// Slice mesh resolution level the family was generated at.
    pub level: usize,
    /// Parameters `(t, s)` of the maximising slice.
    pub max_params: (f64, Option<f64>),
    pub max_f: f64,
    /// Every evaluated slice in row-major `(t, s)` order.
    pub samples: Vec<GridSample>,
}

impl WidthEstimate {
    pub fn is_low_resolution(&self) -> bool {
        self.grid.is_low_resolution()
    }

    /// The per-slice dump as CSV text.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(GRID_CSV_HEADER);
        out.push('\n');
        for p in &self.samples {
            let s = p.s.map(|s| s.to_string()).unwrap_or_default();
            let genus = p.genus.map(|g| g.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{:.12},{},{}", p.t, s, p.f, genus, u8::from(p.degenerate));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

impl fmt::Display for WidthEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (t, s) = self.max_params;
        writeln!(f, "family={}", self.family)?;
        writeln!(f, "grid={}", self.grid)?;
        writeln!(f, "level={}", self.level)?;
        writeln!(f, "max_F={:.12}", self.max_f)?;
        write!(f, "argmax_t={t}")?;
        if let Some(s) = s {
            write!(f, "\nargmax_s={s}")?;
        }
        if self.is_low_resolution() {
            write!(f, "\nlow_resolution=true")?;
        }
        Ok(())
    }
}

/// Evaluate `generator(t, s)` on every grid point (in parallel) and return
/// the maximal Gaussian area with its parameters. One-parameter grids call
/// the generator with `s = 0`.
pub fn width_grid<G>(family: FamilyTag, level: usize, spec: GridSpec, generator: G) -> Result<WidthEstimate, SweepoutError>
where
    G: Fn(f64, f64) -> Result<SweepoutSlice, SweepoutError> + Sync,
{
    if spec.sample_count() == 0 {
        return Err(SweepoutError::InvalidParams(format!("empty grid {spec}")));
    }
    let ts = grid_points(spec.nt);
    let ss: Vec<Option<f64>> = match spec.ns {
        Some(n) => grid_points(n).into_iter().map(Some).collect(),
        None => vec![None],
    };
    let points: Vec<(f64, Option<f64>)> = ts
        .iter()
        .flat_map(|&t| ss.iter().map(move |&s| (t, s)))
        .collect();
    let samples = points
        .par_iter()
        .map(|&(t, s)| {
            let slice = generator(t, s.unwrap_or(0.0))?;
            let genus = if spec.topology {
                slice.topology().transpose()?.map(|r| r.genus)
            } else {
                None
            };
            Ok(GridSample {
                t,
                s,
                f: slice.gaussian_area,
                genus,
                degenerate: slice.degenerate,
            })
        })
        .collect::<Result<Vec<_>, SweepoutError>>()?;
    // First maximum in row-major order, for determinism.
    let best = samples
        .iter()
        .fold(&samples[0], |best, p| if p.f > best.f { p } else { best });
    Ok(WidthEstimate {
        family,
        grid: spec,
        level,
        max_params: (best.t, best.s),
        max_f: best.f,
        samples,
    })
}

/// Comparison of a one-parameter width `ω₁` with a two-parameter width
/// `ω₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthInequalityReport {
    pub omega1: f64,
    pub omega2: f64,
    /// `ω₂ − ω₁`; the lower inequality holds up to `grid_tolerance`.
    pub lower_margin: f64,
    /// Allowed grid error in the lower inequality (1% of `ω₁`).
    pub grid_tolerance: f64,
    /// `2ω₁ − ω₂`; the upper inequality needs it strictly positive.
    pub upper_margin: f64,
    /// `upper_margin / ε₁²`, the constant of an `ε₁²` margin.
    pub fitted_constant: f64,
    /// `ω₁` and `ω₂` agree to rounding: the degenerate equal-width regime.
    pub equal: bool,
    /// Both estimates come from the same slice mesh level.
    pub same_tier: bool,
}

impl WidthInequalityReport {
    pub fn lower_holds(&self) -> bool {
        self.lower_margin >= -self.grid_tolerance
    }

    pub fn upper_holds(&self) -> bool {
        self.upper_margin > 0.0
    }

    /// Strict `ω₁ < ω₂`, the regime producing a new critical surface.
    pub fn strict_lower_holds(&self) -> bool {
        !self.equal && self.lower_margin > 0.0
    }

    /// Whether `f` lies strictly between `ω₁` and `2ω₁`.
    pub fn brackets(&self, f: f64) -> bool {
        f > self.omega1 && f < 2.0 * self.omega1
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for WidthInequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "omega1={:.12}", self.omega1)?;
        writeln!(f, "omega2={:.12}", self.omega2)?;
        writeln!(
            f,
            "omega2 >= omega1: {} margin={:.6e} tolerance={:.3e}",
            verdict(self.lower_holds()),
            self.lower_margin,
            self.grid_tolerance
        )?;
        writeln!(f, "omega2 < 2*omega1: {} margin={:.6e}", verdict(self.upper_holds()), self.upper_margin)?;
        writeln!(
            f,
            "omega1 < omega2 (strict): {}{}",
            verdict(self.strict_lower_holds()),
            if self.equal { " equality" } else { "" }
        )?;
        writeln!(f, "margin_constant={:.6e}", self.fitted_constant)?;
        write!(f, "same_tier={}", self.same_tier)
    }
}

/// Check `ω₁ ≤ ω₂ < 2ω₁` for a one-parameter estimate `w1` and a
/// two-parameter estimate `w2`; `epsilon1` scales the reported margin
/// constant.
pub fn check_width_inequalities(w1: &WidthEstimate, w2: &WidthEstimate, epsilon1: f64) -> WidthInequalityReport {
    let (o1, o2) = (w1.max_f, w2.max_f);
    let upper_margin = 2.0 * o1 - o2;
    WidthInequalityReport {
        omega1: o1,
        omega2: o2,
        lower_margin: o2 - o1,
        grid_tolerance: 0.01 * o1.abs(),
        upper_margin,
        fitted_constant: upper_margin / (epsilon1 * epsilon1),
        equal: (o2 - o1).abs() <= 1e-12 * o1.abs().max(o2.abs()),
        same_tier: w1.level == w2.level,
    }
}

/// `2F(S²) − max_t F(Λ_t)` for the neck-opening family at offsets
/// `(ε, δ)`, sampled on `n` values of `t`.
pub fn neck_opening_margin(
    scheme: &PlatonicScheme,
    epsilon: f64,
    delta: f64,
    n: usize,
    cfg: &SweepoutConfig,
) -> Result<f64, SweepoutError> {
    let w = width_grid(FamilyTag::Catenoid, cfg.level, GridSpec::one_parameter(n), |t, _| {
        catenoid_family(scheme, epsilon, delta, t, cfg)
    })?;
    Ok(2.0 * shrinking_sphere_area() - w.max_f)
}

/// The largest offset `ε` of `(ε, margin)` pairs such that the margin is
/// positive at every listed offset up to and including it.
pub fn largest_admissible_offset(margins: &[(f64, f64)]) -> Option<f64> {
    let mut sorted: Vec<(f64, f64)> = margins.iter().copied().filter(|(e, _)| *e > 0.0).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    sorted.iter().take_while(|(_, m)| *m > 0.0).last().map(|(e, _)| *e)
}

/// Empirical stand-in for the existential offset bound of the neck-opening
/// estimate: the largest candidate `ε` (with `δ = −ε`, or `δ = ε/2` when
/// `same_sign`) below which every candidate keeps a positive margin on
/// this mesh. It is a property of the discretisation, not a bound on the
/// true constant.
pub fn empirical_offset_bound(
    scheme: &PlatonicScheme,
    candidates: &[f64],
    same_sign: bool,
    n: usize,
    cfg: &SweepoutConfig,
) -> Result<Option<f64>, SweepoutError> {
    let margins = candidates
        .iter()
        .filter(|&&e| e > 0.0)
        .map(|&e| {
            let delta = if same_sign { 0.5 * e } else { -e };
            Ok((e, neck_opening_margin(scheme, e, delta, n, cfg)?))
        })
        .collect::<Result<Vec<_>, SweepoutError>>()?;
    Ok(largest_admissible_offset(&margins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweepout::{sphere_family, SchemeName};
    use crate::symmetry::{GroupName, RotationGroup};
    use std::sync::Arc;

    fn sphere_width(n: usize, level: usize) -> WidthEstimate {
        let group = Arc::new(RotationGroup::build(GroupName::O24));
        let cfg = SweepoutConfig { level, ..Default::default() };
        width_grid(FamilyTag::Sphere, level, GridSpec::one_parameter(n), |t, _| sphere_family(&group, t, &cfg)).unwrap()
    }

    #[test]
    fn grid_points_cover_the_interval() {
        assert_eq!(grid_points(1), vec![0.5]);
        assert_eq!(grid_points(3), vec![0.0, 0.5, 1.0]);
        assert!(grid_points(0).is_empty());
    }

    #[test]
    fn sphere_width_is_near_the_shrinking_sphere() {
        let w = sphere_width(41, 2);
        assert!((w.max_f / shrinking_sphere_area() - 1.0).abs() < 0.01);
        assert!(w.samples.iter().all(|p| p.f <= w.max_f));
        let (t, s) = w.max_params;
        assert!(s.is_none());
        assert!((t - 0.7).abs() < 0.05);
        assert_eq!(w.samples.len(), 41);
        assert!(w.samples[0].degenerate && w.samples[40].degenerate);
    }

    #[test]
    fn single_sample_grid_is_low_resolution() {
        let w = sphere_width(1, 1);
        assert!(w.is_low_resolution());
        assert_eq!(w.max_params.0, 0.5);
        assert!(w.to_string().contains("low_resolution=true"));
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let w = sphere_width(5, 1);
        let csv = w.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], GRID_CSV_HEADER);
        assert_eq!(lines.len(), 6);
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 5));
        assert_eq!(lines[1], "0,,0.000000000000,,1");
    }

    #[test]
    fn identical_estimates_flag_equality() {
        let w = sphere_width(5, 1);
        let r = check_width_inequalities(&w, &w, 0.05);
        assert!(r.equal && r.lower_holds() && r.upper_holds() && !r.strict_lower_holds());
        assert!(r.same_tier);
        assert!(r.to_string().contains("equality"));
    }

    #[test]
    fn doubled_estimate_passes_both_inequalities() {
        let w1 = sphere_width(5, 1);
        let mut w2 = w1.clone();
        w2.max_f = 1.5 * w1.max_f;
        let r = check_width_inequalities(&w1, &w2, 0.1);
        assert!(r.lower_holds() && r.upper_holds() && r.strict_lower_holds());
        assert!((r.fitted_constant - 0.5 * w1.max_f / 0.01).abs() < 1e-9);
        assert!(r.brackets(1.2 * w1.max_f) && !r.brackets(2.1 * w1.max_f));
        w2.max_f = 2.0 * w1.max_f;
        assert!(!check_width_inequalities(&w1, &w2, 0.1).upper_holds());
    }

    #[test]
    fn admissible_offset_stops_at_the_first_failure() {
        assert_eq!(largest_admissible_offset(&[(0.2, 1.0), (0.05, 0.1), (0.1, 0.3)]), Some(0.2));
        assert_eq!(largest_admissible_offset(&[(0.05, 0.1), (0.1, -0.3), (0.2, 1.0)]), Some(0.05));
        assert_eq!(largest_admissible_offset(&[(0.05, 0.0)]), None);
        assert_eq!(largest_admissible_offset(&[]), None);
    }

    #[test]
    fn small_offsets_are_admissible() {
        let scheme = PlatonicScheme::build(SchemeName::O24Z4);
        let cfg = SweepoutConfig { level: 3, ..Default::default() };
        let bound = empirical_offset_bound(&scheme, &[0.1, 0.2], false, 9, &cfg).unwrap();
        assert_eq!(bound, Some(0.2));
        assert!(neck_opening_margin(&scheme, 0.1, -0.1, 9, &cfg).unwrap() > 0.0);
    }
}
