//! The four subcommands. Each returns the summary printed to stdout and
//! writes its artifacts (plus `config.txt` and `manifest.txt`) into the
//! output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shrinker::mesh::{vertex_normals, write_mesh, TriMesh};
use shrinker::minmax::{
    check_width_inequalities, saddle_init, solve_shrinker, GridSpec, IterationRecord, SolveOutcome, SolverError,
    WidthEstimate,
};
use shrinker::sweepout::{
    catenoid_family, catenoid_family_with_parameter, doubled_family, shrinking_sphere_area, sphere_family,
    FamilyTag, PlatonicScheme, SchemeName, SweepoutConfig,
};
use shrinker::symmetry::{symmetric_sphere, symmetrize, GroupName, RotationGroup};

use crate::config::{RunConfig, SchemeChoice};
use crate::error::CliError;

const DEFAULT_SCHEME: SchemeName = SchemeName::O24Z4;
const DEFAULT_LEVEL: usize = 3;
/// The neck-opening margins need one more level to resolve `ε = 0.05`.
const CATENOID_LEVEL: usize = 4;
const SPHERE_GRID: usize = 200;
const DOUBLED_GRID: usize = 60;
const CATENOID_GRID: usize = 21;

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Output directory with the resolved configuration written into it.
struct RunDir {
    path: PathBuf,
    hash: String,
}

impl RunDir {
    fn create(cfg: &RunConfig) -> Result<Self, CliError> {
        fs::create_dir_all(&cfg.out)
            .map_err(|e| CliError::Config(format!("cannot create output directory {}: {e}", cfg.out.display())))?;
        fs::write(cfg.out.join("config.txt"), cfg.to_text())?;
        Ok(Self {
            path: cfg.out.clone(),
            hash: cfg.hash(),
        })
    }

    fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    fn write(&self, name: &str, text: &str) -> Result<(), CliError> {
        fs::write(self.file(name), text)?;
        Ok(())
    }

    /// Manifest: command, configuration hash and one line per artifact.
    fn manifest(&self, command: &str, lines: &[String]) -> Result<String, CliError> {
        let mut text = format!("command={command}\nconfig_hash={}\nconfig_file=config.txt\n", self.hash);
        for line in lines {
            text.push_str(line);
            text.push('\n');
        }
        self.write("manifest.txt", &text)?;
        Ok(text)
    }
}

fn platonic(cfg: &RunConfig) -> Result<PlatonicScheme, CliError> {
    match cfg.scheme {
        Some(SchemeChoice::Platonic(name)) => Ok(PlatonicScheme::build(name)),
        None => Ok(PlatonicScheme::build(DEFAULT_SCHEME)),
        Some(SchemeChoice::Sphere) => Err(CliError::Config("this family needs a doubled scheme, not sphere".into())),
    }
}

fn sphere_group(cfg: &RunConfig) -> Arc<RotationGroup> {
    let name = match cfg.scheme {
        Some(SchemeChoice::Platonic(s)) => s.group_name(),
        _ => GroupName::O24,
    };
    Arc::new(RotationGroup::build(name))
}

fn resolve_family(cfg: &RunConfig) -> FamilyTag {
    cfg.family.unwrap_or(match cfg.scheme {
        Some(SchemeChoice::Sphere) => FamilyTag::Sphere,
        _ => FamilyTag::Doubled,
    })
}

fn require(values: &[f64], name: &str, family: FamilyTag) -> Result<(), CliError> {
    if values.is_empty() {
        Err(CliError::Config(format!("family {family} needs --{name}")))
    } else {
        Ok(())
    }
}

/// `generate`: write the requested slices and a manifest with their
/// parameters, Gaussian areas and genera.
pub fn cmd_generate(cfg: &RunConfig) -> Result<String, CliError> {
    let family = resolve_family(cfg);
    let sweep = cfg.sweepout_at(cfg.level_or(DEFAULT_LEVEL));
    require(&cfg.t, "t", family)?;
    let params: Vec<(f64, f64)> = match family {
        FamilyTag::Sphere | FamilyTag::Catenoid => cfg.t.iter().map(|&t| (t, 0.0)).collect(),
        FamilyTag::Doubled | FamilyTag::CatenoidWithParameter => {
            require(&cfg.s, "s", family)?;
            cfg.t.iter().flat_map(|&t| cfg.s.iter().map(move |&s| (t, s))).collect()
        }
    };
    let scheme = match family {
        FamilyTag::Sphere => None,
        _ => Some(platonic(cfg)?),
    };
    let group = sphere_group(cfg);
    let dir = RunDir::create(cfg)?;
    let mut lines = Vec::new();
    for (i, &(t, s)) in params.iter().enumerate() {
        let slice = match (family, &scheme) {
            (FamilyTag::Sphere, _) => sphere_family(&group, t, &sweep)?,
            (FamilyTag::Doubled, Some(sc)) => doubled_family(sc, t, s, &sweep)?,
            (FamilyTag::Catenoid, Some(sc)) => catenoid_family(sc, cfg.epsilon, cfg.delta, t, &sweep)?,
            (FamilyTag::CatenoidWithParameter, Some(sc)) => catenoid_family_with_parameter(sc, s, t, cfg.eta, &sweep)?,
            _ => unreachable!("non-sphere families always have a scheme"),
        };
        let name = format!("slice_{i:03}.{}", cfg.format.extension());
        write_mesh(&slice.mesh, dir.file(&name))?;
        let genus = match slice.topology().transpose()? {
            Some(r) => r.genus.to_string(),
            None => "none".to_string(),
        };
        let scheme_name = scheme.as_ref().map_or("sphere".to_string(), |s| s.name.to_string());
        lines.push(format!(
            "slice file={name} family={family} scheme={scheme_name} {} level={} F={:.12} genus={genus} degenerate={} triangles={}",
            slice.params,
            sweep.level,
            slice.gaussian_area,
            slice.degenerate,
            slice.mesh.triangle_count()
        ));
    }
    dir.manifest("generate", &lines)
}

fn sphere_width(group: &Arc<RotationGroup>, n: usize, sweep: &SweepoutConfig, topology: bool) -> Result<WidthEstimate, CliError> {
    let spec = GridSpec::one_parameter(n).with_topology(topology);
    Ok(shrinker::minmax::width_grid(FamilyTag::Sphere, sweep.level, spec, |t, _| {
        sphere_family(group, t, sweep)
    })?)
}

/// `width`: evaluate a family on a grid, dump the CSV and summarise the
/// width estimates with the inequality checks.
pub fn cmd_width(cfg: &RunConfig) -> Result<String, CliError> {
    let family = resolve_family(cfg);
    let sweep = cfg.sweepout_at(cfg.level_or(DEFAULT_LEVEL));
    let star = shrinking_sphere_area();
    let mut summary = String::new();
    match family {
        FamilyTag::Sphere => {
            let n = match cfg.grid {
                None => SPHERE_GRID,
                Some(g) if g.ns.is_none() => g.nt,
                Some(g) => return Err(CliError::Config(format!("the sphere family takes a one-parameter grid, got {g}"))),
            };
            let dir = RunDir::create(cfg)?;
            let w = sphere_width(&sphere_group(cfg), n, &sweep, cfg.topology)?;
            w.write_csv(dir.file("width.csv"))?;
            let rel = w.max_f / star - 1.0;
            let _ = writeln!(summary, "{w}");
            let _ = writeln!(summary, "reference_F={star:.12}");
            let _ = writeln!(summary, "relative_error={rel:.6e}");
            let _ = writeln!(summary, "omega1 = 4/e within 1%: {}", verdict(rel.abs() <= 0.01));
            dir.write("summary.txt", &summary)?;
            dir.manifest("width", &["csv file=width.csv".into(), "summary file=summary.txt".into()])?;
        }
        FamilyTag::Doubled => {
            let scheme = platonic(cfg)?;
            let spec = match cfg.grid {
                None => GridSpec::two_parameter(DOUBLED_GRID, DOUBLED_GRID),
                Some(g) => GridSpec::two_parameter(g.nt, g.ns.unwrap_or(g.nt)),
            }
            .with_topology(cfg.topology);
            let dir = RunDir::create(cfg)?;
            let w2 = shrinker::minmax::width_grid(FamilyTag::Doubled, sweep.level, spec, |t, s| {
                doubled_family(&scheme, t, s, &sweep)
            })?;
            let w1 = sphere_width(&scheme.group, SPHERE_GRID, &sweep, false)?;
            w2.write_csv(dir.file("width.csv"))?;
            w1.write_csv(dir.file("sphere_width.csv"))?;
            let report = check_width_inequalities(&w1, &w2, sweep.epsilon1);
            let _ = writeln!(summary, "scheme={}", scheme.name);
            let _ = writeln!(summary, "{w2}");
            let _ = writeln!(summary, "sphere_grid={}", w1.grid);
            let _ = writeln!(summary, "{report}");
            let _ = writeln!(
                summary,
                "omega2 < 8/e: {} margin={:.6e}",
                verdict(w2.max_f < 2.0 * star),
                2.0 * star - w2.max_f
            );
            dir.write("summary.txt", &summary)?;
            dir.manifest(
                "width",
                &[
                    "csv file=width.csv".into(),
                    "csv file=sphere_width.csv".into(),
                    "summary file=summary.txt".into(),
                ],
            )?;
        }
        FamilyTag::Catenoid => {
            let scheme = platonic(cfg)?;
            let n = cfg.grid.map_or(CATENOID_GRID, |g| g.nt);
            let dir = RunDir::create(cfg)?;
            let w = shrinker::minmax::width_grid(FamilyTag::Catenoid, sweep.level, GridSpec::one_parameter(n), |t, _| {
                catenoid_family(&scheme, cfg.epsilon, cfg.delta, t, &sweep)
            })?;
            w.write_csv(dir.file("width.csv"))?;
            let _ = writeln!(summary, "{w}");
            let _ = writeln!(summary, "margin_to_8/e={:.6e}", 2.0 * star - w.max_f);
            dir.write("summary.txt", &summary)?;
            dir.manifest("width", &["csv file=width.csv".into(), "summary file=summary.txt".into()])?;
        }
        FamilyTag::CatenoidWithParameter => {
            return Err(CliError::Config(
                "width supports the sphere, doubled and catenoid families".into(),
            ))
        }
    }
    Ok(summary)
}

/// Equivariant random normal perturbation of `amplitude` mean edge
/// lengths, reproducible from `seed`.
pub fn perturb(mesh: &TriMesh, group: &RotationGroup, amplitude: f64, seed: u64) -> Result<TriMesh, CliError> {
    let normals = vertex_normals(mesh)?;
    let edges = mesh.adjacency().edges();
    let x = mesh.vertices();
    let h = edges.iter().map(|[a, b]| (x[*a] - x[*b]).norm()).sum::<f64>() / edges.len().max(1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moved = x
        .iter()
        .zip(&normals)
        .map(|(p, n)| p + n * (amplitude * h * rng.random_range(-1.0..=1.0)))
        .collect();
    symmetrize(&mesh.with_vertices(moved), group).map_err(|e| CliError::Generation(e.to_string()))
}

fn iteration_csv(log: &[IterationRecord]) -> String {
    let mut out = String::from("iteration,stage,residual_l2,residual_linf,lambda,step\n");
    for r in log {
        let _ = writeln!(
            out,
            "{},{},{:.6e},{:.6e},{:.3e},{:.6e}",
            r.iteration, r.stage, r.residual_l2, r.residual_linf, r.lambda, r.step
        );
    }
    out
}

fn outcome_report(status: &str, target: &str, expected_genus: usize, outcome: &SolveOutcome) -> String {
    let star = shrinking_sphere_area();
    let f = outcome.report.f_value;
    let mut text = format!("status={status}\nscheme={target}\nexpected_genus={expected_genus}\n{}", outcome.report);
    let _ = writeln!(text, "F_over_sphere={:.9}", f / star);
    let _ = writeln!(text, "F_between_4/e_and_8/e={}", f > star && f < 2.0 * star);
    text
}

fn write_outcome(dir: &RunDir, cfg: &RunConfig, mesh_name: &str, report: &str, outcome: &SolveOutcome) -> Result<Vec<String>, CliError> {
    let name = format!("{mesh_name}.{}", cfg.format.extension());
    write_mesh(&outcome.mesh, dir.file(&name))?;
    dir.write("report.txt", report)?;
    dir.write("iterations.csv", &iteration_csv(&outcome.log))?;
    Ok(vec![
        format!("mesh file={name}"),
        "report file=report.txt".into(),
        "log file=iterations.csv".into(),
    ])
}

/// `solve`: initial surface, solver and verification. Partial artifacts
/// are written when the solver stops early.
pub fn cmd_solve(cfg: &RunConfig) -> Result<String, CliError> {
    let target = cfg
        .scheme
        .ok_or_else(|| CliError::Config("solve needs --scheme (sphere or a doubled scheme)".into()))?;
    let kernel = cfg.sweepout.kernel;
    let (init, group, expected_genus, init_note) = match target {
        SchemeChoice::Sphere => {
            let group = Arc::new(RotationGroup::build(GroupName::O24));
            let level = cfg.level_or(DEFAULT_LEVEL);
            let mesh = symmetric_sphere(&group, level, cfg.radius);
            (mesh, group, 0, format!("init=sphere radius={} level={level}", cfg.radius))
        }
        SchemeChoice::Platonic(name) => {
            let scheme = PlatonicScheme::build(name);
            let init = saddle_init(&scheme, cfg.edge_length, &kernel).map_err(|e| CliError::Generation(e.to_string()))?;
            let note = format!(
                "init=frame mid_radius={} half_gap={} tau={} edge_length={} search_residual={:.6e}",
                init.shape.mid_radius, init.shape.half_gap, init.shape.tau, cfg.edge_length, init.search_residual
            );
            (init.mesh, scheme.group.clone(), scheme.expected_genus(), note)
        }
    };
    let init = if cfg.perturb > 0.0 {
        perturb(&init, &group, cfg.perturb, cfg.seed)?
    } else {
        init
    };
    let dir = RunDir::create(cfg)?;
    let label = target.to_string();
    match solve_shrinker(&init, &group, &cfg.solver) {
        Ok(outcome) => {
            let report = format!("{}{init_note}\n", outcome_report("converged", &label, expected_genus, &outcome));
            let lines = write_outcome(&dir, cfg, "shrinker", &report, &outcome)?;
            dir.manifest("solve", &lines)?;
            Ok(report)
        }
        Err(err) => {
            let status = match &err {
                SolverError::GenusChanged { .. } => "genus-changed",
                SolverError::MaxIterations { .. } => "max-iterations",
                SolverError::MeshQualityCollapse { .. } => "quality-collapse",
                _ => "failed",
            };
            if let Some(partial) = err.partial() {
                let report = format!(
                    "{}{init_note}\nerror={err}\n",
                    outcome_report(status, &label, expected_genus, partial)
                );
                let lines = write_outcome(&dir, cfg, "partial", &report, partial)?;
                dir.manifest("solve", &lines)?;
                eprint!("{report}");
            }
            Err(CliError::from(&err))
        }
    }
}

/// Maximum of the Gaussian area along one neck-opening family.
struct CatenoidRow {
    epsilon: f64,
    delta: f64,
    max_f: f64,
    argmax_t: f64,
    /// `2·F(S*) − max F` with the exact sphere area.
    margin: f64,
    /// The same with the sphere area measured on the slice mesh.
    mesh_margin: f64,
    degenerate: bool,
    samples: Vec<(f64, f64)>,
}

fn catenoid_row(scheme: &PlatonicScheme, epsilon: f64, same_sign: bool, n: usize, sweep: &SweepoutConfig, reference: f64) -> Result<CatenoidRow, CliError> {
    let star2 = 2.0 * shrinking_sphere_area();
    if epsilon == 0.0 {
        // Both sheets sit on the shrinking sphere: the doubled sphere itself.
        return Ok(CatenoidRow {
            epsilon,
            delta: 0.0,
            max_f: star2,
            argmax_t: 0.0,
            margin: 0.0,
            mesh_margin: 0.0,
            degenerate: true,
            samples: Vec::new(),
        });
    }
    let delta = if same_sign { 0.5 * epsilon } else { -epsilon };
    let w = shrinker::minmax::width_grid(FamilyTag::Catenoid, sweep.level, GridSpec::one_parameter(n), |t, _| {
        catenoid_family(scheme, epsilon, delta, t, sweep)
    })?;
    Ok(CatenoidRow {
        epsilon,
        delta,
        max_f: w.max_f,
        argmax_t: w.max_params.0,
        margin: star2 - w.max_f,
        mesh_margin: reference - w.max_f,
        degenerate: false,
        samples: w.samples.iter().map(|p| (p.t, p.f)).collect(),
    })
}

/// Least-squares `margin ≈ τ̂ ε²` and the relative RMS misfit.
fn fit_quadratic(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let num: f64 = points.iter().map(|(e, m)| m * e * e).sum();
    let den: f64 = points.iter().map(|(e, _)| e.powi(4)).sum();
    if den == 0.0 {
        return None;
    }
    let tau = num / den;
    let rss: f64 = points.iter().map(|(e, m)| (m - tau * e * e).powi(2)).sum();
    let tss: f64 = points.iter().map(|(_, m)| m * m).sum();
    Some((tau, (rss / tss.max(f64::MIN_POSITIVE)).sqrt()))
}

/// `catenoid-check`: margins below twice the sphere area along the
/// neck-opening families and their `ε²` scaling.
pub fn cmd_catenoid_check(cfg: &RunConfig) -> Result<String, CliError> {
    let scheme = platonic(cfg)?;
    let sweep = cfg.sweepout_at(cfg.level_or(CATENOID_LEVEL));
    let n = cfg.grid.map_or(CATENOID_GRID, |g| g.nt);
    let dir = RunDir::create(cfg)?;
    // Two coincident shrinking spheres meshed like the family's slices.
    let reference = catenoid_family(&scheme, 1e-9, -1e-9, 0.0, &sweep)?.gaussian_area;
    let rows = cfg
        .epsilons
        .iter()
        .map(|&e| catenoid_row(&scheme, e, cfg.same_sign, n, &sweep, reference))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("epsilon,delta,t,F\n");
    let mut summary = format!(
        "scheme={}\nlevel={}\ngrid={n}\nvariant={}\nreference_2F={:.12}\nmesh_reference_2F={reference:.12}\n",
        scheme.name,
        sweep.level,
        if cfg.same_sign { "same-sign" } else { "opposite-sign" },
        2.0 * shrinking_sphere_area()
    );
    for r in &rows {
        for (t, f) in &r.samples {
            let _ = writeln!(csv, "{},{},{},{:.12}", r.epsilon, r.delta, t, f);
        }
        let _ = writeln!(
            summary,
            "epsilon={} delta={} max_F={:.12} argmax_t={} margin={:.6e} mesh_margin={:.6e} positive={} degenerate={}",
            r.epsilon,
            r.delta,
            r.max_f,
            r.argmax_t,
            r.margin,
            r.mesh_margin,
            verdict(r.margin > 0.0),
            r.degenerate
        );
    }
    let live: Vec<&CatenoidRow> = rows.iter().filter(|r| !r.degenerate).collect();
    for a in &live {
        if let Some(b) = live.iter().find(|b| (b.epsilon - 2.0 * a.epsilon).abs() < 1e-12) {
            let ratio = b.margin / a.margin;
            let _ = writeln!(
                summary,
                "ratio margin({})/margin({})={ratio:.4} within [2, 8]: {}",
                b.epsilon,
                a.epsilon,
                verdict((2.0..=8.0).contains(&ratio))
            );
        }
    }
    let exact: Vec<(f64, f64)> = live.iter().map(|r| (r.epsilon, r.margin)).collect();
    if let Some((tau, misfit)) = fit_quadratic(&exact) {
        let _ = writeln!(summary, "fitted_tau={tau:.6e}\nfit_relative_rms={misfit:.4}");
    }
    if let Some(alpha) = shrinker::minmax::largest_admissible_offset(&exact) {
        let _ = writeln!(summary, "empirical_alpha={alpha}");
    }
    let all_positive = live.iter().all(|r| r.margin > 0.0);
    let _ = writeln!(summary, "all margins positive: {}", verdict(all_positive));
    dir.write("catenoid.csv", &csv)?;
    dir.write("catenoid.txt", &summary)?;
    dir.manifest("catenoid-check", &["csv file=catenoid.csv".into(), "summary file=catenoid.txt".into()])?;
    Ok(summary)
}
