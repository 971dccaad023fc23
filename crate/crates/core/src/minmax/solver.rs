use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::report::{verify, ShrinkerReport};
use super::{SolverConfig, SolverError};
use crate::gaussian::{vertex_residual, CurvatureScheme, GaussKernelConfig};
use crate::mesh::{refine, validate, vertex_normals, OrbitTags, TriMesh, Vec3};
use crate::symmetry::{symmetrize, RotationGroup};

/// One accepted solver step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Refinement stage (0 for the initial mesh).
    pub stage: usize,
    pub residual_l2: f64,
    pub residual_linf: f64,
    pub lambda: f64,
    /// Largest normal offset applied in the step.
    pub step: f64,
}

/// Result of a solver run: the final mesh, its diagnostics and the
/// per-iteration history.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub mesh: TriMesh,
    pub report: ShrinkerReport,
    pub log: Vec<IterationRecord>,
}

/// The least-squares problem on a fixed connectivity: one unknown normal
/// offset per vertex orbit, one residual row per orbit representative.
struct OrbitProblem<'a> {
    mesh: &'a TriMesh,
    tags: Arc<OrbitTags>,
    kernel: GaussKernelConfig,
    members: Vec<Vec<usize>>,
    /// Orbits whose representative residual depends on each orbit.
    affected: Vec<Vec<usize>>,
    sizes: Vec<f64>,
}

impl<'a> OrbitProblem<'a> {
    fn new(mesh: &'a TriMesh, kernel: GaussKernelConfig) -> Result<Self, SolverError> {
        let tags = mesh.orbit_tags().cloned().ok_or(SolverError::MissingOrbitTags)?;
        let n = tags.orbit_count();
        let members: Vec<Vec<usize>> = (0..n).map(|o| tags.members(o)).collect();
        let rings = match kernel.curvature_scheme {
            CurvatureScheme::Cotangent => 1,
            CurvatureScheme::QuadraticFit => 2,
        };
        let adj = mesh.adjacency();
        let affected = members
            .iter()
            .map(|mem| {
                let mut set = BTreeSet::new();
                for &v in mem {
                    set.insert(tags.orbit_of(v));
                    for u in adj.k_ring(v, rings) {
                        set.insert(tags.orbit_of(u));
                    }
                }
                set.into_iter().collect()
            })
            .collect();
        let sizes = members.iter().map(|m| m.len() as f64).collect();
        Ok(Self {
            mesh,
            tags,
            kernel,
            members,
            affected,
            sizes,
        })
    }

    fn orbit_count(&self) -> usize {
        self.members.len()
    }

    fn residual_at(&self, x: &[Vec3], o: usize) -> Result<(f64, f64), SolverError> {
        let rep = self.tags.representative(o);
        Ok(vertex_residual(self.mesh, x, rep, &self.kernel)?.unwrap_or((0.0, 0.0)))
    }

    /// Residuals and row weights (orbit size × Gaussian dual area).
    fn rows(&self, x: &[Vec3]) -> Result<(DVector<f64>, DVector<f64>), SolverError> {
        let n = self.orbit_count();
        let mut r = DVector::zeros(n);
        let mut w = DVector::zeros(n);
        for o in 0..n {
            let (ro, wo) = self.residual_at(x, o)?;
            r[o] = ro;
            w[o] = wo * self.sizes[o];
        }
        Ok((r, w))
    }

    /// Forward-difference Jacobian of the representative residuals with
    /// respect to the orbit normal offsets.
    fn jacobian(&self, x: &[Vec3], normals: &[Vec3], r: &DVector<f64>, h: f64) -> Result<DMatrix<f64>, SolverError> {
        let n = self.orbit_count();
        let mut jac = DMatrix::zeros(n, n);
        let mut xp = x.to_vec();
        for j in 0..n {
            for &v in &self.members[j] {
                xp[v] = x[v] + h * normals[v];
            }
            for &o in &self.affected[j] {
                let (ro, _) = self.residual_at(&xp, o)?;
                jac[(o, j)] = (ro - r[o]) / h;
            }
            for &v in &self.members[j] {
                xp[v] = x[v];
            }
        }
        Ok(jac)
    }

    fn apply(&self, x: &[Vec3], normals: &[Vec3], delta: &DVector<f64>) -> Vec<Vec3> {
        let mut out = x.to_vec();
        for (j, mem) in self.members.iter().enumerate() {
            for &v in mem {
                out[v] += delta[j] * normals[v];
            }
        }
        out
    }
}

fn weighted_norms(r: &DVector<f64>, w: &DVector<f64>) -> (f64, f64) {
    let l2 = r.iter().zip(w.iter()).map(|(a, b)| b * a * a).sum::<f64>().sqrt();
    (l2, r.amax())
}

/// Move every vertex towards the centroid of its neighbours within its
/// tangent plane.
fn tangential_smoothing(mesh: &TriMesh, normals: &[Vec3], weight: f64) -> Vec<Vec3> {
    let adj = mesh.adjacency();
    let x = mesh.vertices();
    (0..x.len())
        .map(|v| {
            let nb = adj.neighbors(v);
            let c: Vec3 = nb.iter().map(|&u| x[u]).sum::<Vec3>() / nb.len() as f64;
            let d = c - x[v];
            let n = normals[v];
            x[v] + weight * (d - d.dot(&n) * n)
        })
        .collect()
}

/// Mean length of the edges at every vertex.
fn local_edge_lengths(mesh: &TriMesh) -> Vec<f64> {
    let adj = mesh.adjacency();
    let x = mesh.vertices();
    (0..x.len())
        .map(|v| {
            let nb = adj.neighbors(v);
            nb.iter().map(|&u| (x[u] - x[v]).norm()).sum::<f64>() / nb.len() as f64
        })
        .collect()
}

/// A pair of vertices that are far apart on the surface but closer in
/// space than `factor` times the local edge length: the sign of a pinching
/// neck or of two sheets about to merge.
pub fn detect_pinch(mesh: &TriMesh, factor: f64) -> Option<(usize, usize)> {
    let x = mesh.vertices();
    let lengths = local_edge_lengths(mesh);
    let cell = factor * lengths.iter().copied().fold(0.0, f64::max);
    if cell <= 0.0 {
        return None;
    }
    let key = |p: &Vec3| {
        [
            (p.x / cell).floor() as i64,
            (p.y / cell).floor() as i64,
            (p.z / cell).floor() as i64,
        ]
    };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (v, p) in x.iter().enumerate() {
        grid.entry(key(p)).or_default().push(v);
    }
    let adj = mesh.adjacency();
    for (v, p) in x.iter().enumerate() {
        let radius = factor * lengths[v];
        let [i, j, k] = key(p);
        let mut ring: Option<Vec<usize>> = None;
        for di in -1..=1 {
            for dj in -1..=1 {
                for dk in -1..=1 {
                    let Some(ids) = grid.get(&[i + di, j + dj, k + dk]) else {
                        continue;
                    };
                    for &u in ids {
                        if u == v || (x[u] - p).norm() >= radius {
                            continue;
                        }
                        let near = ring.get_or_insert_with(|| adj.k_ring(v, 2));
                        if !near.contains(&u) {
                            return Some((v, u));
                        }
                    }
                }
            }
        }
    }
    None
}

fn check_config(cfg: &SolverConfig) -> Result<(), SolverError> {
    let ok = cfg.residual_tol_linf > 0.0
        && cfg.lambda_init >= 0.0
        && cfg.lambda_decay > 0.0
        && cfg.lambda_decay <= 1.0
        && cfg.lambda_growth > 1.0
        && cfg.fd_step > 0.0
        && cfg.tangential_smoothing_weight >= 0.0
        && cfg.tangential_smoothing_weight < 1.0
        && cfg.max_step > 0.0
        && (0.0..1.0).contains(&cfg.quality_collapse_ratio);
    if ok {
        Ok(())
    } else {
        Err(SolverError::InvalidConfig(format!("{cfg:?}")))
    }
}

/// Solve `H = ½⟨x, ν⟩` by damped Gauss–Newton (Levenberg–Marquardt) on one
/// normal offset per vertex orbit, minimising `Σ wᵢ rᵢ²`.
///
/// Each accepted step is followed by projection onto equivariant
/// configurations and, while the residual is large, by area-neutral
/// tangential smoothing (kept only when it does not raise the residual).
/// Neck pinches and sheet collisions abort with `GenusChanged`; collapsing
/// triangles abort with `MeshQualityCollapse`.
pub fn solve_shrinker(init: &TriMesh, group: &Arc<RotationGroup>, cfg: &SolverConfig) -> Result<SolveOutcome, SolverError> {
    check_config(cfg)?;
    if init.orbit_tags().is_none() {
        return Err(SolverError::MissingOrbitTags);
    }
    let genus = validate(init, false)?.genus;
    let mut mesh = symmetrize(&init.clone().with_sphere_radius(None), group)?;
    let mut log = Vec::new();
    let mut iteration = 0;
    for stage in 0..=cfg.refinements {
        if stage > 0 {
            mesh = symmetrize(&refine(&mesh), group)?;
        }
        let last_stage = stage == cfg.refinements;
        let stage_tol = if last_stage {
            cfg.residual_tol_linf
        } else {
            cfg.residual_tol_linf.max(cfg.coarse_stage_tol)
        };
        mesh = run_stage(mesh, group, cfg, stage, stage_tol, &mut iteration, &mut log)?;
    }
    let mut report = verify(&mesh, group, &cfg.kernel, cfg.residual_tol_linf)?;
    report.iterations = iteration;
    let outcome = SolveOutcome { mesh, report, log };
    if outcome.report.genus != genus {
        return Err(SolverError::GenusChanged {
            iteration,
            partial: Box::new(outcome),
        });
    }
    Ok(outcome)
}

#[allow(clippy::too_many_arguments)]
fn run_stage(
    mut mesh: TriMesh,
    group: &Arc<RotationGroup>,
    cfg: &SolverConfig,
    stage: usize,
    tol: f64,
    iteration: &mut usize,
    log: &mut Vec<IterationRecord>,
) -> Result<TriMesh, SolverError> {
    let topology = mesh.clone();
    let problem = OrbitProblem::new(&topology, cfg.kernel)?;
    let mut lambda = cfg.lambda_init;
    let (mut r, mut w) = problem.rows(mesh.vertices())?;
    let (mut l2, mut linf) = weighted_norms(&r, &w);
    let quality_floor = cfg.quality_collapse_ratio * mesh.min_triangle_quality();
    let partial = |mesh: &TriMesh, iterations: usize, log: &[IterationRecord]| -> Box<SolveOutcome> {
        let mut report = verify(mesh, group, &cfg.kernel, cfg.residual_tol_linf).unwrap_or_else(|_| ShrinkerReport::unavailable());
        report.iterations = iterations;
        Box::new(SolveOutcome {
            mesh: mesh.clone(),
            report,
            log: log.to_vec(),
        })
    };
    while linf > tol {
        if *iteration >= cfg.max_iterations {
            return Err(SolverError::MaxIterations {
                iterations: *iteration,
                partial: partial(&mesh, *iteration, log),
            });
        }
        *iteration += 1;
        let x = mesh.vertices().to_vec();
        let normals = vertex_normals(&mesh)?;
        let jac = problem.jacobian(&x, &normals, &r, cfg.fd_step)?;
        let wj = DMatrix::from_fn(jac.nrows(), jac.ncols(), |i, j| w[i] * jac[(i, j)]);
        let normal_matrix = jac.transpose() * &wj;
        let gradient = wj.transpose() * &r;
        let scale = normal_matrix.diagonal().amax().max(f64::MIN_POSITIVE);
        let lengths = local_edge_lengths(&mesh);
        let h_mean = lengths.iter().sum::<f64>() / lengths.len() as f64;
        let mut accepted = None;
        for _ in 0..=cfg.max_rejections {
            let mut a = normal_matrix.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * (normal_matrix[(i, i)] + 1e-9 * scale);
            }
            let Some(chol) = a.cholesky() else {
                lambda = (lambda * cfg.lambda_growth).max(1e-12);
                continue;
            };
            let mut delta = -chol.solve(&gradient);
            let cap = cfg.max_step * h_mean;
            let biggest = delta.amax();
            if biggest > cap {
                delta *= cap / biggest;
            }
            let trial = problem.apply(&x, &normals, &delta);
            let mut trial_mesh = mesh.with_vertices(trial);
            if cfg.symmetrize_every_step {
                trial_mesh = symmetrize(&trial_mesh, group)?;
            }
            let (tr, tw) = problem.rows(trial_mesh.vertices())?;
            let (tl2, tlinf) = weighted_norms(&tr, &tw);
            if tl2 < l2 {
                accepted = Some((trial_mesh, tr, tw, tl2, tlinf, delta.amax()));
                // Damping below the squared residual keeps the terminal
                // phase quadratic.
                lambda = (lambda * cfg.lambda_decay).min(tl2 * tl2);
                break;
            }
            lambda = (lambda * cfg.lambda_growth).max(1e-12);
        }
        let Some((next, nr, nw, nl2, nlinf, step)) = accepted else {
            return Err(SolverError::MaxIterations {
                iterations: *iteration,
                partial: partial(&mesh, *iteration, log),
            });
        };
        mesh = next;
        (r, w, l2, linf) = (nr, nw, nl2, nlinf);
        if linf > cfg.smoothing_threshold && cfg.tangential_smoothing_weight > 0.0 {
            let normals = vertex_normals(&mesh)?;
            let smoothed = tangential_smoothing(&mesh, &normals, cfg.tangential_smoothing_weight);
            let smoothed = symmetrize(&mesh.with_vertices(smoothed), group)?;
            let (sr, sw) = problem.rows(smoothed.vertices())?;
            let (sl2, slinf) = weighted_norms(&sr, &sw);
            if sl2 <= l2 {
                mesh = smoothed;
                (r, w, l2, linf) = (sr, sw, sl2, slinf);
            }
        }
        log.push(IterationRecord {
            iteration: *iteration,
            stage,
            residual_l2: l2,
            residual_linf: linf,
            lambda,
            step,
        });
        if detect_pinch(&mesh, cfg.pinch_factor).is_some() {
            return Err(SolverError::GenusChanged {
                iteration: *iteration,
                partial: partial(&mesh, *iteration, log),
            });
        }
        let quality = mesh.min_triangle_quality();
        if quality < quality_floor {
            return Err(SolverError::MeshQualityCollapse {
                iteration: *iteration,
                quality,
                partial: partial(&mesh, *iteration, log),
            });
        }
    }
    Ok(mesh)
}
