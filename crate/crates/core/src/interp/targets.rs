use serde::{Deserialize, Serialize};

use crate::disk::PointSequence;
use crate::error::{Error, Result};
use crate::hardy::C64;
use crate::profile::WeightProfile;

/// Closed-form target families, all functions of the gap `1 - |lambda|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetGenerator {
    /// `exp(-c / gap)`.
    ExpNegCOverGap { c: f64 },
    /// `exp(-c / gap^2)`.
    ExpNegCOverGapSq { c: f64 },
    /// `gap^(d_n)`, one exponent per node.
    GapPower { d: Vec<f64> },
    /// `exp(-(1/gap) integral_0^gap h)`.
    ProfileDecay { h: WeightProfile },
    /// No closed form: a declaration that the whole sequence, not just the
    /// listed values, has modulus in `[lower, upper]`.
    BoundedModulus { lower: f64, upper: f64 },
}

impl TargetGenerator {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Self::ExpNegCOverGap { c } | Self::ExpNegCOverGapSq { c } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::Domain(format!("generator constant must be positive, got {c}")));
                }
            }
            Self::GapPower { d } => {
                if d.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: d.len() });
                }
                if d.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Domain("gap_power exponents must be finite".into()));
                }
            }
            Self::ProfileDecay { h } => h.validate()?,
            Self::BoundedModulus { lower, upper } => {
                if !(*lower > 0.0 && lower <= upper && upper.is_finite()) {
                    return Err(Error::Domain(format!("bounded_modulus needs 0 < lower <= upper, got [{lower}, {upper}]")));
                }
            }
        }
        Ok(())
    }

    /// `log |w_n|` at each point.
    pub fn log_modulus(&self, points: &[C64]) -> Result<Vec<f64>> {
        self.validate(points.len())?;
        if let Self::BoundedModulus { .. } = self {
            return Err(Error::Contract("bounded_modulus does not determine target values".into()));
        }
        Ok(points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let g = 1.0 - p.norm();
                match self {
                    Self::ExpNegCOverGap { c } => -c / g,
                    Self::ExpNegCOverGapSq { c } => -c / (g * g),
                    Self::GapPower { d } => d[i] * g.ln(),
                    Self::ProfileDecay { h } => -h.integral_unchecked(g) / g,
                    Self::BoundedModulus { .. } => unreachable!(),
                }
            })
            .collect())
    }

    pub fn name(&self) -> String {
        match self {
            Self::ExpNegCOverGap { c } => format!("exp_neg_c_over_gap({c})"),
            Self::ExpNegCOverGapSq { c } => format!("exp_neg_c_over_gap_sq({c})"),
            Self::GapPower { .. } => "gap_power".into(),
            Self::ProfileDecay { h } => format!("profile_decay({})", h.name()),
            Self::BoundedModulus { lower, upper } => format!("bounded_modulus({lower}, {upper})"),
        }
    }
}

/// Targets `w_n` aligned with a point sequence. `log_modulus` is kept
/// separately so that targets far below the smallest positive float stay
/// usable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSequence {
    pub values: Vec<C64>,
    pub log_modulus: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<TargetGenerator>,
}

impl TargetSequence {
    pub fn from_values(values: Vec<C64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("target {v} is not finite")));
        }
        let log_modulus = values.iter().map(|v| v.norm().ln()).collect();
        Ok(Self {
            values,
            log_modulus,
            generator: None,
        })
    }

    pub fn from_generator(points: &PointSequence<f64>, generator: TargetGenerator) -> Result<Self> {
        let log_modulus = generator.log_modulus(points.points())?;
        let values = log_modulus.iter().map(|l| C64::new(l.exp(), 0.0)).collect();
        Ok(Self {
            values,
            log_modulus,
            generator: Some(generator),
        })
    }

    /// Explicit values checked against a generator to `1e-12` relative.
    pub fn checked(points: &PointSequence<f64>, values: Vec<C64>, generator: TargetGenerator) -> Result<Self> {
        if let TargetGenerator::BoundedModulus { lower, upper } = generator {
            generator.validate(points.len())?;
            check_len(points, values.len())?;
            let mut t = Self::from_values(values)?;
            if let Some(v) = t.values.iter().find(|v| !(v.norm() >= lower && v.norm() <= upper)) {
                return Err(Error::Contract(format!("target {v} is outside the declared modulus range [{lower}, {upper}]")));
            }
            t.generator = Some(generator);
            return Ok(t);
        }
        let gen = Self::from_generator(points, generator)?;
        check_len(points, values.len())?;
        for (i, (v, w)) in values.iter().zip(&gen.values).enumerate() {
            if (v - w).norm() > 1e-12 * w.norm().max(f64::MIN_POSITIVE) {
                return Err(Error::Contract(format!("target {i} = {v} disagrees with its generator value {w}")));
            }
        }
        Ok(Self { values, ..gen })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Principal logarithms `log |w_n| + i arg w_n`.
    pub fn logs(&self) -> Vec<C64> {
        self.values.iter().zip(&self.log_modulus).map(|(v, l)| C64::new(*l, v.arg())).collect()
    }

    /// `inf |w_n|`, `sup |w_n|` in log form.
    pub fn log_bounds(&self) -> (f64, f64) {
        let lo = self.log_modulus.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.log_modulus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.log_bounds();
        (lo.exp(), hi.exp())
    }
}

pub(crate) fn check_len(points: &PointSequence<f64>, n: usize) -> Result<()> {
    if points.len() != n {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: n,
        });
    }
    Ok(())
}

/// Wire form: explicit values, a generator, or both (then cross-checked).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<TargetGenerator>,
}

impl TargetSpec {
    pub fn build(&self, points: &PointSequence<f64>) -> Result<TargetSequence> {
        match (&self.values, &self.generator) {
            (Some(v), Some(g)) => TargetSequence::checked(points, v.clone(), g.clone()),
            (None, Some(g)) => TargetSequence::from_generator(points, g.clone()),
            (Some(v), None) => {
                check_len(points, v.len())?;
                TargetSequence::from_values(v.clone())
            }
            (None, None) => Err(Error::Contract("targets need values or a generator".into())),
        }
    }
}
