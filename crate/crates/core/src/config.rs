//! Grid parameters and tolerances. Every default can be overridden by the CLI.

use serde::{Deserialize, Serialize};

/// Uniform-grid policy for boundary integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Default number of samples on the circle.
    pub default_m: usize,
    /// Safety factor in `M >= kappa * 2 pi / (1 - |z|)`.
    pub kappa: f64,
    /// Largest grid the evaluators are allowed to build.
    pub max_m: usize,
    /// Number of geometric panels in graded quadrature.
    pub graded_panels: usize,
    /// Ratio between consecutive graded panel endpoints.
    pub graded_ratio: f64,
    /// Whether evaluators may re-grid when `M` is too coarse for a point.
    pub refine: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            default_m: 4096,
            kappa: 4.0,
            max_m: 1 << 22,
            graded_panels: 40,
            graded_ratio: 0.25,
            refine: true,
        }
    }
}

impl GridConfig {
    /// Applies the `HARDY_INTERP_MAX_GRID` cap when present.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(m) = std::env::var("HARDY_INTERP_MAX_GRID")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
        {
            cfg.max_m = m.max(64).next_power_of_two();
        }
        cfg
    }

    /// Graded rule with 16-point Gauss-Legendre panels.
    pub fn graded<T: crate::Real>(&self) -> crate::quadrature::GradedQuadrature<T> {
        crate::quadrature::GradedQuadrature::new(16, self.graded_panels, self.graded_ratio)
    }

    /// Smallest admissible power-of-two grid for evaluation at radius `rho`.
    pub fn required_m(&self, rho: f64) -> usize {
        let need = self.kappa * 2.0 * std::f64::consts::PI / (1.0 - rho).max(f64::MIN_POSITIVE);
        if !need.is_finite() || need > (usize::MAX / 4) as f64 {
            return usize::MAX;
        }
        (need.ceil() as usize).max(64).next_power_of_two()
    }
}

/// Numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub boundary_guard: f64,
    pub pick_floor: f64,
    pub schur_residual: f64,
    pub outer_residual: f64,
    pub sup_slack: f64,
    pub outer_deficit: f64,
    pub decay: f64,
    pub sandwich: f64,
    /// Fraction of the working index used as the circle radius in the k-th
    /// root construction; must lie in (0, 1).
    pub radius_fraction: f64,
    pub ladder_steps: usize,
    pub max_root: u64,
    /// Largest admissible `max |w| / min |w|` for the bounded-below path.
    pub modulus_span: f64,
    pub boundary_mean: f64,
    pub r_squared: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            boundary_guard: 1e-12,
            pick_floor: 1e-10,
            schur_residual: 1e-8,
            outer_residual: 1e-6,
            sup_slack: 1e-6,
            outer_deficit: 1e-6,
            decay: 1e-2,
            sandwich: 1e-8,
            radius_fraction: 0.9,
            ladder_steps: 20,
            max_root: 1 << 16,
            modulus_span: 1e12,
            boundary_mean: 1e-11,
            r_squared: 0.9,
        }
    }
}

impl Tolerances {
    /// Sets one field by name, as used by `--tol-override key=value`.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), String> {
        match key {
            "boundary_guard" => self.boundary_guard = value,
            "pick_floor" => self.pick_floor = value,
            "schur_residual" => self.schur_residual = value,
            "outer_residual" => self.outer_residual = value,
            "sup_slack" => self.sup_slack = value,
            "outer_deficit" => self.outer_deficit = value,
            "decay" => self.decay = value,
            "sandwich" => self.sandwich = value,
            "radius_fraction" => {
                if !(value > 0.0 && value < 1.0) {
                    return Err("radius_fraction must lie in (0, 1)".into());
                }
                self.radius_fraction = value
            }
            "ladder_steps" => self.ladder_steps = value as usize,
            "max_root" => self.max_root = value as u64,
            "modulus_span" => self.modulus_span = value,
            "boundary_mean" => self.boundary_mean = value,
            "r_squared" => self.r_squared = value,
            other => return Err(format!("unknown tolerance `{other}`")),
        }
        Ok(())
    }
}

/// Bundle of grid policy and tolerances passed through the pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    pub grid: GridConfig,
    pub tol: Tolerances,
}
