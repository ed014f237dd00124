use std::sync::OnceLock;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::boundary::{conjugate_samples, herglotz_eval, BoundaryFunction, BoundarySpec};
use crate::config::GridConfig;
use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Outer function `exp(scale * H[W])` with `H` the Herglotz integral.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterSpec {
    pub log_modulus: BoundarySpec,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(skip)]
    cache: OnceLock<BoundaryFunction<f64>>,
}

fn one() -> f64 {
    1.0
}

impl OuterSpec {
    pub fn new(log_modulus: BoundarySpec, scale: f64) -> Self {
        Self {
            log_modulus,
            scale,
            cache: OnceLock::new(),
        }
    }

    /// Boundary data `W`, built once.
    pub fn w(&self, grid: &GridConfig) -> Result<&BoundaryFunction<f64>> {
        if let Some(w) = self.cache.get() {
            return Ok(w);
        }
        let w = self.log_modulus.build(grid)?;
        let _ = self.cache.set(w);
        Ok(self.cache.get().expect("just set"))
    }

    pub fn validate(&self, grid: &GridConfig) -> Result<()> {
        if !self.scale.is_finite() {
            return Err(Error::Domain("outer scale must be finite".into()));
        }
        let w = self.w(grid)?;
        let m0 = herglotz_eval(w, C64::new(0.0, 0.0), grid)?;
        if !m0.re.is_finite() {
            return Err(Error::Integrability("log-modulus has no finite mean".into()));
        }
        Ok(())
    }

    pub fn log_at(&self, z: C64, grid: &GridConfig) -> Result<C64> {
        Ok(herglotz_eval(self.w(grid)?, z, grid)? * self.scale)
    }

    /// Boundary values of the logarithm, `scale * (W + i W~)`.
    pub fn boundary_log(&self, m: usize, shifted: bool, grid: &GridConfig) -> Result<Vec<C64>> {
        let w = self.w(grid)?.samples_on(m, shifted, grid)?;
        let conj = conjugate_samples(&w);
        Ok(w.iter().zip(&conj).map(|(a, b)| C64::new(*a, *b) * self.scale).collect())
    }

    /// Mean of `scale * W` over the circle: closed form for profile data,
    /// otherwise the same quadrature the Herglotz integral uses.
    pub fn mean_log_modulus(&self, grid: &GridConfig) -> Result<f64> {
        let mean = match &self.log_modulus {
            BoundarySpec::Profile { profile, scale, .. } => {
                -scale * profile.integral_unchecked(1.0f64) / std::f64::consts::PI
            }
            BoundarySpec::Grid(_) => herglotz_eval(self.w(grid)?, C64::new(0.0, 0.0), grid)?.re,
        };
        Ok(self.scale * mean)
    }
}
