//! Decreasing weight profiles `h` on `(0, 1]` and the averaged Poisson
//! functional `A_h(r)`.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::config::GridConfig;
use crate::error::{Error, Result};
use crate::quadrature::SideMass;
use crate::scalar::Real;

/// Lower sandwich constant `1 / (2 pi)`.
pub const SANDWICH_LOWER: f64 = 1.0 / (2.0 * std::f64::consts::PI);
/// Upper sandwich constant `(2 + pi) / pi`.
pub const SANDWICH_UPPER: f64 = (2.0 + std::f64::consts::PI) / std::f64::consts::PI;

/// Positive non-increasing integrable function on `(0, 1]`, extended by zero
/// to `(1, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightProfile {
    /// `h(t) = (1 - alpha) t^(-alpha)`.
    Power { alpha: f64 },
    /// `h(t) = 2 / (t log(c / t)^p)`.
    LogPower { c: f64, p: f64 },
    /// Piecewise constant on `n` equal cells of `[0, 1]`.
    Sampled { values: Vec<f64> },
}

impl WeightProfile {
    pub fn power(alpha: f64) -> Result<Self> {
        let h = Self::Power { alpha };
        h.validate()?;
        Ok(h)
    }

    pub fn log_power(c: f64, p: f64) -> Result<Self> {
        let h = Self::LogPower { c, p };
        h.validate()?;
        Ok(h)
    }

    pub fn sampled(values: Vec<f64>) -> Result<Self> {
        let h = Self::Sampled { values };
        h.validate()?;
        Ok(h)
    }

    /// Checks positivity, monotonicity and the parameter ranges.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Power { alpha } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::Domain(format!("power profile needs 0 < alpha < 1, got {alpha}")));
                }
            }
            Self::LogPower { c, p } => {
                if !(p.is_finite() && *p > 1.0) {
                    return Err(Error::Domain(format!("log_power profile needs p > 1, got {p}")));
                }
                // t log(c/t)^p is increasing on (0, 1] iff log c >= p
                if !(c.is_finite() && c.ln() >= *p) {
                    return Err(Error::Domain(format!(
                        "log_power profile needs log(c) >= p for monotonicity, got c = {c}, p = {p}"
                    )));
                }
            }
            Self::Sampled { values } => {
                if values.is_empty() {
                    return Err(Error::Domain("sampled profile has no cells".into()));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::Domain("sampled profile values must be finite and nonnegative".into()));
                }
                if values.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::Domain("sampled profile must be non-increasing".into()));
                }
            }
        }
        Ok(())
    }

    /// Whether `h log+ h` is integrable.
    pub fn zygmund(&self) -> bool {
        true
    }

    /// Whether the circle conjugate of `h(|t|)` is bounded.
    ///
    /// False for every kind: the catalog profiles are unbounded at 0, which
    /// makes the conjugate unbounded near 0, and sampled profiles have jumps.
    pub fn conjugate_bounded(&self) -> bool {
        false
    }

    pub fn name(&self) -> String {
        match self {
            Self::Power { alpha } => format!("power({alpha})"),
            Self::LogPower { c, p } => format!("log_power({c},{p})"),
            Self::Sampled { values } => format!("sampled[{}]", values.len()),
        }
    }

    /// `h(t)` for `t >= 0`; zero beyond 1 and `+inf` at 0 for the catalog kinds.
    pub fn eval<T: Real>(&self, t: T) -> T {
        let t = t.abs();
        if t > T::one() {
            return T::zero();
        }
        match self {
            Self::Power { alpha } => {
                let a = T::lit(*alpha);
                (T::one() - a) * t.powf(-a)
            }
            Self::LogPower { c, p } => {
                let l = (T::lit(*c) / t).ln();
                T::lit(2.0) / (t * l.powf(T::lit(*p)))
            }
            Self::Sampled { values } => {
                let n = values.len();
                let idx = (t * T::count(n)).floor().to_usize().unwrap_or(n).min(n - 1);
                T::lit(values[idx])
            }
        }
    }

    /// Exact `integral_0^x h`, with `x` clamped to 1.
    pub fn integral<T: Real>(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain(format!("profile integral needs x > 0, got {x}")));
        }
        Ok(self.integral_unchecked(x))
    }

    /// As [`integral`](Self::integral) but returns 0 for `x <= 0`.
    pub fn integral_unchecked<T: Real>(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        let x = x.min(T::one());
        match self {
            Self::Power { alpha } => x.powf(T::one() - T::lit(*alpha)),
            Self::LogPower { c, p } => {
                let l = (T::lit(*c) / x).ln();
                let p = T::lit(*p);
                T::lit(2.0) * l.powf(T::one() - p) / (p - T::one())
            }
            Self::Sampled { values } => {
                let n = values.len();
                let width = T::one() / T::count(n);
                let mut acc = T::zero();
                for (i, v) in values.iter().enumerate() {
                    let a = T::count(i) * width;
                    if a >= x {
                        break;
                    }
                    let b = (a + width).min(x);
                    acc = acc + T::lit(*v) * (b - a);
                }
                acc
            }
        }
    }

    /// The profile integral as a side-mass closure for graded quadrature.
    pub fn side_mass<T: Real>(&self, scale: T) -> SideMass<T> {
        let h = self.clone();
        Arc::new(move |x: T| scale * h.integral_unchecked(x))
    }

    /// Interior jump locations in `(0, 1)`.
    pub fn jumps(&self) -> Vec<f64> {
        match self {
            Self::Sampled { values } if values.len() <= 512 => {
                let n = values.len();
                (1..n).filter(|&i| values[i] != values[i - 1]).map(|i| i as f64 / n as f64).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Poisson kernel `P_r(t) = (1 - r^2) / (1 - 2 r cos t + r^2)`, evaluated in a
/// form that stays accurate for `r` close to 1.
pub fn poisson_kernel<T: Real>(r: T, t: T) -> T {
    let s = (t / T::lit(2.0)).sin();
    let gap = T::one() - r;
    gap * (T::one() + r) / (gap * gap + T::lit(4.0) * r * s * s)
}

/// `A_h(r)` together with its sandwich bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AhReport {
    pub r: f64,
    pub value: f64,
    /// `integral_0^(1-r) h`.
    pub integral: f64,
    pub lower: f64,
    pub upper: f64,
    /// `value / integral`, absent when the integral vanishes.
    pub ratio: Option<f64>,
    /// `min(value - lower, upper - value)`.
    pub margin: f64,
}

/// `A_h(r) = (1 - r) (1 / 2 pi) integral_{-pi}^{pi} P_r(t) h(|t|) dt`.
pub fn a_h<T: Real>(h: &WeightProfile, r: T, grid: &GridConfig) -> Result<AhReport> {
    h.validate()?;
    if !(r >= T::zero() && r < T::one()) {
        return Err(Error::Domain(format!("a_h needs r in [0, 1), got {r}")));
    }
    let gap = T::one() - r;
    let integral = h.integral_unchecked(gap);
    let value = match h {
        WeightProfile::Sampled { values } => {
            // exact: integral_0^t P_r = 2 atan((1 + r) / (1 - r) tan(t / 2))
            let big = |t: T| T::lit(2.0) * ((T::one() + r) / gap * (t / T::lit(2.0)).tan()).atan();
            let n = values.len();
            let mut acc = T::zero();
            for (i, v) in values.iter().enumerate() {
                let a = T::count(i) / T::count(n);
                let b = T::count(i + 1) / T::count(n);
                acc = acc + T::lit(*v) * (big(b) - big(a));
            }
            gap * acc / T::PI()
        }
        _ => {
            let q = grid.graded::<T>();
            let kernel = |t: T| Complex::new(poisson_kernel(r, t), T::zero());
            let weight = |t: T| h.eval(t);
            let mass = h.side_mass(T::one());
            let v = q.toward(T::zero(), T::one(), &kernel, &weight, Some(&mass));
            gap * v.re / T::PI()
        }
    };
    let value = value.to_f64_lossy();
    let integral = integral.to_f64_lossy();
    let lower = SANDWICH_LOWER * integral;
    let upper = SANDWICH_UPPER * integral;
    let slack = 1e-12 * upper.max(f64::MIN_POSITIVE);
    if !(value >= lower - slack && value <= upper + slack) {
        return Err(Error::SandwichViolation { lower, value, upper });
    }
    Ok(AhReport {
        r: r.to_f64_lossy(),
        value,
        integral,
        lower,
        upper,
        ratio: (integral > 0.0).then(|| value / integral),
        margin: (value - lower).min(upper - value),
    })
}
