//! Run configuration: a plain-text `key = value` file with command-line
//! overrides, resolved into typed settings for every command.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use shrinker::gaussian::{CurvatureScheme, GaussKernelConfig};
use shrinker::minmax::SolverConfig;
use shrinker::sweepout::{FamilyTag, SchemeName, SweepoutConfig};

use crate::error::CliError;

/// Raw `key → value` pairs in file order of precedence (later wins).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyValues(BTreeMap<String, String>);

impl KeyValues {
    /// Parse `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got {line:?}", n + 1)))?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", n + 1)));
            }
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {key:?}", n + 1)));
            }
        }
        Ok(Self(map))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        self.0
            .remove(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("invalid value {v:?} for {key}")))
            })
            .transpose()
    }

    fn take_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.take(key)?.unwrap_or(default))
    }

    fn take_list(&mut self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.0
            .remove(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::Config(format!("invalid number {x:?} in {key}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

/// Target of a command: the round sphere or one of the doubled schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Sphere,
    Platonic(SchemeName),
}

impl FromStr for SchemeChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("sphere") {
            return Ok(Self::Sphere);
        }
        s.parse::<SchemeName>().map(Self::Platonic).map_err(|_| {
            let names: Vec<String> = SchemeName::ALL.iter().map(|n| n.to_string()).collect();
            CliError::Config(format!("unknown scheme {s:?}; expected sphere or one of {}", names.join(", ")))
        })
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sphere => f.write_str("sphere"),
            Self::Platonic(n) => n.fmt(f),
        }
    }
}

/// Grid resolution: `N` or `NxM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridArg {
    pub nt: usize,
    pub ns: Option<usize>,
}

impl FromStr for GridArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Config(format!("invalid grid {s:?}; expected N or NxM"));
        let parse = |x: &str| x.trim().parse::<usize>().ok().filter(|&n| n > 0);
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(Self {
                nt: parse(a).ok_or_else(bad)?,
                ns: Some(parse(b).ok_or_else(bad)?),
            }),
            None => Ok(Self {
                nt: parse(s).ok_or_else(bad)?,
                ns: None,
            }),
        }
    }
}

impl fmt::Display for GridArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ns {
            Some(ns) => write!(f, "{}x{}", self.nt, ns),
            None => write!(f, "{}", self.nt),
        }
    }
}

/// Output mesh format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Obj,
    Ply,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Obj => "obj",
            Self::Ply => "ply",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(Self::Obj),
            "ply" => Ok(Self::Ply),
            _ => Err(CliError::Config(format!("unknown mesh format {s:?}; expected obj or ply"))),
        }
    }
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: Option<SchemeChoice>,
    pub family: Option<FamilyTag>,
    /// Slice parameters for `generate` (Cartesian product of the lists).
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    /// Sheet offsets of a single neck-opening slice.
    pub epsilon: f64,
    pub delta: f64,
    /// Sheet separation of the parametrised neck-opening family.
    pub eta: f64,
    /// Offsets scanned by `catenoid-check`.
    pub epsilons: Vec<f64>,
    /// Use same-sign offsets `δ = ε/2` instead of `δ = −ε`.
    pub same_sign: bool,
    pub grid: Option<GridArg>,
    /// Mesh resolution level for slices and sphere starts.
    pub refine: Option<usize>,
    pub out: PathBuf,
    pub seed: u64,
    /// Amplitude (in mean edge lengths) of the seeded start perturbation.
    pub perturb: f64,
    pub format: OutputFormat,
    /// Target edge length of the solver's initial surface.
    pub edge_length: f64,
    /// Start radius of sphere solves.
    pub radius: f64,
    /// Record the genus of every grid slice.
    pub topology: bool,
    pub sweepout: SweepoutConfig,
    pub solver: SolverConfig,
}

impl RunConfig {
    /// Build from raw pairs; unknown keys are rejected.
    pub fn from_key_values(mut kv: KeyValues) -> Result<Self, CliError> {
        let sd = SweepoutConfig::default();
        let sv = SolverConfig::default();
        let kernel = GaussKernelConfig::new(
            kv.take_or("quadrature_order", sd.kernel.quadrature_order())?,
            match kv.take::<String>("curvature_scheme")? {
                Some(s) => s
                    .parse::<CurvatureScheme>()
                    .map_err(|e| CliError::Config(e.to_string()))?,
                None => sd.kernel.curvature_scheme,
            },
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let refine = kv.take::<usize>("refine")?;
        let cfg = Self {
            scheme: kv.take::<String>("scheme")?.map(|s| s.parse()).transpose()?,
            family: kv
                .take::<String>("family")?
                .map(|s| s.parse::<FamilyTag>().map_err(|e| CliError::Config(e.to_string())))
                .transpose()?,
            t: kv.take_list("t")?.unwrap_or_default(),
            s: kv.take_list("s")?.unwrap_or_default(),
            epsilon: kv.take_or("epsilon", 0.1)?,
            delta: kv.take_or("delta", -0.1)?,
            eta: kv.take_or("eta", 0.1)?,
            epsilons: kv.take_list("epsilons")?.unwrap_or_else(|| vec![0.05, 0.1, 0.2]),
            same_sign: kv.take_or("same_sign", false)?,
            grid: kv.take("grid")?,
            refine,
            out: kv.take_or("out", PathBuf::from("out"))?,
            seed: kv.take_or("seed", 0)?,
            perturb: kv.take_or("perturb", 0.0)?,
            format: kv.take_or("format", OutputFormat::Obj)?,
            edge_length: kv.take_or("edge_length", 0.17)?,
            radius: kv.take_or("radius", 1.9)?,
            topology: kv.take_or("topology", false)?,
            sweepout: SweepoutConfig {
                level: refine.unwrap_or(sd.level),
                epsilon1: kv.take_or("epsilon1", sd.epsilon1)?,
                amplitude: kv.take_or("amplitude", sd.amplitude)?,
                alpha: kv.take_or("alpha", sd.alpha)?,
                alpha2: kv.take_or("alpha2", sd.alpha2)?,
                kernel,
            },
            solver: SolverConfig {
                max_iterations: kv.take_or("max_iterations", sv.max_iterations)?,
                residual_tol_linf: kv.take_or("tol", sv.residual_tol_linf)?,
                lambda_init: kv.take_or("lambda_init", sv.lambda_init)?,
                lambda_decay: kv.take_or("lambda_decay", sv.lambda_decay)?,
                lambda_growth: kv.take_or("lambda_growth", sv.lambda_growth)?,
                max_rejections: kv.take_or("max_rejections", sv.max_rejections)?,
                fd_step: kv.take_or("fd_step", sv.fd_step)?,
                tangential_smoothing_weight: kv.take_or("tangential_smoothing_weight", sv.tangential_smoothing_weight)?,
                smoothing_threshold: kv.take_or("smoothing_threshold", sv.smoothing_threshold)?,
                symmetrize_every_step: kv.take_or("symmetrize_every_step", sv.symmetrize_every_step)?,
                refinements: kv.take_or("refinements", sv.refinements)?,
                coarse_stage_tol: kv.take_or("coarse_stage_tol", sv.coarse_stage_tol)?,
                max_step: kv.take_or("max_step", sv.max_step)?,
                quality_collapse_ratio: kv.take_or("quality_collapse_ratio", sv.quality_collapse_ratio)?,
                pinch_factor: kv.take_or("pinch_factor", sv.pinch_factor)?,
                kernel,
            },
        };
        if let Some(key) = kv.0.keys().next() {
            return Err(CliError::Config(format!("unknown configuration key {key:?}")));
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        // The parametrised neck-opening family takes a signed sheet offset
        // for `s`; everywhere else both parameters live in [0, 1].
        let s_unit = self.family != Some(FamilyTag::CatenoidWithParameter);
        let unit: Vec<f64> = self.t.iter().chain(self.s.iter().filter(|_| s_unit)).copied().collect();
        if let Some(x) = unit.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return bad(format!("slice parameter {x} outside [0, 1]"));
        }
        if self.refine.is_some_and(|l| l > 7) {
            return bad("refine must be at most 7".into());
        }
        if !(self.edge_length > 0.0 && self.radius > 0.0 && self.perturb >= 0.0) {
            return bad("edge_length and radius must be positive, perturb non-negative".into());
        }
        if self.solver.residual_tol_linf <= 0.0 {
            return bad("tol must be positive".into());
        }
        if self.epsilons.iter().any(|e| !(0.0..=self.sweepout.alpha).contains(e)) {
            return bad(format!("epsilons must lie in [0, alpha={}]", self.sweepout.alpha));
        }
        Ok(())
    }

    /// Mesh level, with a per-command default.
    pub fn level_or(&self, default: usize) -> usize {
        self.refine.unwrap_or(default)
    }

    /// Sweepout settings at the given level.
    pub fn sweepout_at(&self, level: usize) -> SweepoutConfig {
        SweepoutConfig {
            level,
            ..self.sweepout.clone()
        }
    }

    /// Every setting as `key=value` lines, in a form [`KeyValues::parse`]
    /// reads back.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let sv = &self.solver;
        let sw = &self.sweepout;
        let mut pairs: Vec<(&str, String)> = Vec::new();
        if let Some(s) = self.scheme {
            pairs.push(("scheme", s.to_string()));
        }
        if let Some(f) = self.family {
            pairs.push(("family", f.to_string()));
        }
        if !self.t.is_empty() {
            pairs.push(("t", list(&self.t)));
        }
        if !self.s.is_empty() {
            pairs.push(("s", list(&self.s)));
        }
        if let Some(g) = self.grid {
            pairs.push(("grid", g.to_string()));
        }
        if let Some(r) = self.refine {
            pairs.push(("refine", r.to_string()));
        }
        pairs.extend([
            ("epsilon", self.epsilon.to_string()),
            ("delta", self.delta.to_string()),
            ("eta", self.eta.to_string()),
            ("epsilons", list(&self.epsilons)),
            ("same_sign", self.same_sign.to_string()),
            ("out", self.out.display().to_string()),
            ("seed", self.seed.to_string()),
            ("perturb", self.perturb.to_string()),
            ("format", self.format.extension().to_string()),
            ("edge_length", self.edge_length.to_string()),
            ("radius", self.radius.to_string()),
            ("topology", self.topology.to_string()),
            ("epsilon1", sw.epsilon1.to_string()),
            ("amplitude", sw.amplitude.to_string()),
            ("alpha", sw.alpha.to_string()),
            ("alpha2", sw.alpha2.to_string()),
            ("quadrature_order", sw.kernel.quadrature_order().to_string()),
            ("curvature_scheme", sw.kernel.curvature_scheme.to_string()),
            ("max_iterations", sv.max_iterations.to_string()),
            ("tol", sv.residual_tol_linf.to_string()),
            ("lambda_init", sv.lambda_init.to_string()),
            ("lambda_decay", sv.lambda_decay.to_string()),
            ("lambda_growth", sv.lambda_growth.to_string()),
            ("max_rejections", sv.max_rejections.to_string()),
            ("fd_step", sv.fd_step.to_string()),
            ("tangential_smoothing_weight", sv.tangential_smoothing_weight.to_string()),
            ("smoothing_threshold", sv.smoothing_threshold.to_string()),
            ("symmetrize_every_step", sv.symmetrize_every_step.to_string()),
            ("refinements", sv.refinements.to_string()),
            ("coarse_stage_tol", sv.coarse_stage_tol.to_string()),
            ("max_step", sv.max_step.to_string()),
            ("quality_collapse_ratio", sv.quality_collapse_ratio.to_string()),
            ("pinch_factor", sv.pinch_factor.to_string()),
        ]);
        let mut out = String::new();
        for (k, v) in pairs {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// SHA-256 of [`RunConfig::to_text`], identifying the run settings.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let kv = KeyValues::parse("# run\n scheme = o24-z4 \n\nt=0.7 # slice\n").unwrap();
        let cfg = RunConfig::from_key_values(kv).unwrap();
        assert_eq!(cfg.scheme, Some(SchemeChoice::Platonic(SchemeName::O24Z4)));
        assert_eq!(cfg.t, vec![0.7]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(KeyValues::parse("scheme").is_err());
        assert!(KeyValues::parse("t=1\nt=2").is_err());
        let unknown = KeyValues::parse("colour=red").unwrap();
        assert!(RunConfig::from_key_values(unknown).is_err());
        for text in ["scheme=cube", "t=1.5", "grid=0x3", "tol=0", "family=torus", "quadrature_order=2"] {
            let kv = KeyValues::parse(text).unwrap();
            assert!(matches!(RunConfig::from_key_values(kv), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn grid_forms() {
        assert_eq!("60x40".parse::<GridArg>().unwrap(), GridArg { nt: 60, ns: Some(40) });
        assert_eq!("200".parse::<GridArg>().unwrap(), GridArg { nt: 200, ns: None });
        assert!("x".parse::<GridArg>().is_err());
    }

    #[test]
    fn resolved_text_round_trips() {
        let mut kv = KeyValues::parse("scheme=t12-z3\ngrid=8x9\nt=0.1,0.2\nrefine=2\ntol=1e-5").unwrap();
        kv.set("seed", "7");
        let cfg = RunConfig::from_key_values(kv).unwrap();
        let again = RunConfig::from_key_values(KeyValues::parse(&cfg.to_text()).unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.hash(), again.hash());
        assert_eq!(cfg.hash().len(), 64);
        assert_eq!(cfg.sweepout.level, 2);
        assert_eq!(cfg.solver.residual_tol_linf, 1e-5);
    }
}
