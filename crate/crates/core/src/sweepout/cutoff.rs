use super::SweepoutError;

/// Logarithmic cutoff around a point: 1 outside radius `t`, 0 inside
/// radius `t²`, and `(log t² − log r) / log t` in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    t: f64,
}

impl CutoffProfile {
    pub fn new(t: f64) -> Result<Self, SweepoutError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(SweepoutError::InvalidParams(format!(
                "cutoff radius {t} outside (0, 1)"
            )));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Cutoff value at distance `r` (0 below `t²`).
    pub fn eval(&self, r: f64) -> f64 {
        let t = self.t;
        if r >= t {
            1.0
        } else if r <= t * t {
            0.0
        } else {
            (2.0 * t.ln() - r.ln()) / t.ln()
        }
    }

    /// Derivative with respect to `r` (one-sided at the kinks).
    pub fn derivative(&self, r: f64) -> f64 {
        let t = self.t;
        if r >= t || r <= t * t {
            0.0
        } else {
            -1.0 / (r * t.ln())
        }
    }
}

/// Free-function form of [`CutoffProfile::eval`].
pub fn log_cutoff(profile: &CutoffProfile, r: f64) -> f64 {
    profile.eval(r)
}

/// Strictly increasing reparameterisation `x ↦ tan(π/2 · (base + x·scale))`
/// used to place the two sheets; its derivative is bounded below by
/// `π/2 · scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusMap {
    pub base: f64,
    pub scale: f64,
}

impl RadiusMap {
    pub fn eval(&self, x: f64) -> f64 {
        (0.5 * std::f64::consts::PI * (self.base + x * self.scale)).tan()
    }

    /// Lower bound `C` with `f(x + h) − f(x) ≥ C·h` for `h ≥ 0`.
    pub fn derivative_lower_bound(&self) -> f64 {
        0.5 * std::f64::consts::PI * self.scale
    }
}
