//! Model spaces of interpolating Blaschke products in the basis of
//! normalized Cauchy kernels: co-analytic Toeplitz action, range tests,
//! membership in the common range, and Fourier decay.

mod membership;

use serde::{Deserialize, Serialize};

use crate::disk::PointSequence;
use crate::error::{Error, Result};
use crate::hardy::{HardyFunction, C64};

pub use membership::{
    fourier_coefficients, membership_tests, sufficient_class_check, FourierGrid, FourierReport, LineFit, Membership,
    MembershipVerdict, Method, SufficientReport, TestKind, TestResult, TestStatus,
};

/// `1 / (1 - conj(lambda) z)`.
pub fn cauchy_kernel(lambda: C64, z: C64) -> C64 {
    1.0 / (1.0 - lambda.conj() * z)
}

/// `sqrt(1 - |lambda|^2) / (1 - conj(lambda) z)`, unit norm in `H^2`.
pub fn normalized_kernel(lambda: C64, z: C64) -> C64 {
    cauchy_kernel(lambda, z) * (1.0 - lambda.norm_sqr()).sqrt()
}

/// Closed-form coefficient families, indexed by the gap `1 - |lambda_n|`
/// or by position `n = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoeffGenerator {
    /// `exp(-c / gap)`.
    ExpNegCOverGap { c: f64 },
    /// `n^(-p)`.
    PowerDecay { p: f64 },
    /// The listed values are the whole sequence.
    FiniteSupport,
}

/// Coefficients `a_n` of `f = sum a_n kappa_n`. Moduli are also kept as
/// logarithms so that coefficients like `exp(-3 / (1 - lambda))` survive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    pub a: Vec<C64>,
    pub log_abs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<CoeffGenerator>,
}

impl CoefficientSequence {
    pub fn from_values(a: Vec<C64>) -> Result<Self> {
        if let Some(v) = a.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("coefficient {v} is not finite")));
        }
        let log_abs = a.iter().map(|v| v.norm().ln()).collect();
        Ok(Self { a, log_abs, generator: None })
    }

    pub fn finite_support(a: Vec<C64>) -> Result<Self> {
        Ok(Self {
            generator: Some(CoeffGenerator::FiniteSupport),
            ..Self::from_values(a)?
        })
    }

    pub fn from_generator(points: &PointSequence<f64>, generator: CoeffGenerator) -> Result<Self> {
        let log_abs: Vec<f64> = match &generator {
            CoeffGenerator::ExpNegCOverGap { c } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::Domain(format!("coefficient rate must be positive, got {c}")));
                }
                points.points().iter().map(|p| -c / (1.0 - p.norm())).collect()
            }
            CoeffGenerator::PowerDecay { p } => {
                if !(*p > 0.0 && p.is_finite()) {
                    return Err(Error::Domain(format!("power decay exponent must be positive, got {p}")));
                }
                (1..=points.len()).map(|n| -p * (n as f64).ln()).collect()
            }
            CoeffGenerator::FiniteSupport => {
                return Err(Error::Contract("finite_support needs explicit values".into()));
            }
        };
        Ok(Self {
            a: log_abs.iter().map(|l| C64::new(l.exp(), 0.0)).collect(),
            log_abs,
            generator: Some(generator),
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Multiplies every coefficient by `c`; rates, hence the generator
    /// class, are unchanged.
    pub fn scaled(&self, c: C64) -> Self {
        Self {
            a: self.a.iter().map(|v| v * c).collect(),
            log_abs: self.log_abs.iter().map(|l| l + c.norm().ln()).collect(),
            generator: self.generator.clone(),
        }
    }
}

/// Wire form for coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<CoeffGenerator>,
}

impl CoeffSpec {
    pub fn build(&self, points: &PointSequence<f64>) -> Result<CoefficientSequence> {
        let c = match (&self.values, &self.generator) {
            (Some(v), Some(CoeffGenerator::FiniteSupport)) => CoefficientSequence::finite_support(v.clone())?,
            (Some(v), None) => CoefficientSequence::from_values(v.clone())?,
            (None, Some(g)) => CoefficientSequence::from_generator(points, g.clone())?,
            (Some(v), Some(g)) => {
                let gen = CoefficientSequence::from_generator(points, g.clone())?;
                check_len(points, v.len())?;
                for (i, (x, y)) in v.iter().zip(&gen.a).enumerate() {
                    if (x - y).norm() > 1e-12 * y.norm().max(f64::MIN_POSITIVE) {
                        return Err(Error::Contract(format!("coefficient {i} = {x} disagrees with its generator value {y}")));
                    }
                }
                CoefficientSequence { a: v.clone(), ..gen }
            }
            (None, None) => return Err(Error::Contract("coefficients need values or a generator".into())),
        };
        check_len(points, c.len())?;
        Ok(c)
    }
}

fn check_len(points: &PointSequence<f64>, n: usize) -> Result<()> {
    if points.len() != n {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: n,
        });
    }
    Ok(())
}

/// `log phi(lambda)`, falling back to the principal log of the value.
fn log_value(phi: &HardyFunction, z: C64) -> Result<C64> {
    match phi.log_eval(z) {
        Ok(l) => Ok(l),
        Err(Error::NoLogarithm(_)) => Ok(phi.eval(z)?.ln()),
        Err(e) => Err(e),
    }
}

/// `T_conj(phi) kappa_n = conj(phi(lambda_n)) kappa_n`, so the action on
/// coefficients is diagonal.
pub fn toeplitz_apply(phi: &HardyFunction, coeffs: &CoefficientSequence, points: &PointSequence<f64>) -> Result<CoefficientSequence> {
    check_len(points, coeffs.len())?;
    let mut a = Vec::with_capacity(coeffs.len());
    let mut log_abs = Vec::with_capacity(coeffs.len());
    for ((p, v), l) in points.points().iter().zip(&coeffs.a).zip(&coeffs.log_abs) {
        let lp = log_value(phi, *p)?;
        let la = l + lp.re;
        log_abs.push(la);
        a.push(C64::from_polar(la.exp(), v.arg() - lp.im));
    }
    Ok(CoefficientSequence {
        a,
        log_abs,
        generator: None,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangeReport {
    /// Preimage coefficients `b_n / conj(phi(lambda_n))`.
    pub preimage: CoefficientSequence,
    /// `log sum |b_n / phi(lambda_n)|^2`.
    pub log_weighted_sum: f64,
    /// Largest `|T g - b|` relative to `max |b|`.
    pub roundtrip_residual: f64,
    pub pass: bool,
}

/// Solves `T_conj(phi) g = b` on the kernel basis and applies `T` again.
pub fn range_description_check(
    phi: &HardyFunction,
    points: &PointSequence<f64>,
    b: &CoefficientSequence,
    tol: f64,
) -> Result<RangeReport> {
    check_len(points, b.len())?;
    let mut a = Vec::with_capacity(b.len());
    let mut log_abs = Vec::with_capacity(b.len());
    for ((p, v), l) in points.points().iter().zip(&b.a).zip(&b.log_abs) {
        let lp = log_value(phi, *p)?;
        if !lp.re.is_finite() {
            return Err(Error::Contract(format!("phi vanishes at {p}; an outer function has no zeros")));
        }
        let lg = l - lp.re;
        log_abs.push(lg);
        a.push(C64::from_polar(lg.exp(), v.arg() + lp.im));
    }
    let preimage = CoefficientSequence {
        a,
        log_abs,
        generator: None,
    };
    let back = toeplitz_apply(phi, &preimage, points)?;
    let scale = b.a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let roundtrip_residual = if scale > 0.0 {
        back.a.iter().zip(&b.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
    } else {
        0.0
    };
    let log_weighted_sum = membership::log_sum_exp(preimage.log_abs.iter().map(|l| 2.0 * l));
    Ok(RangeReport {
        preimage,
        log_weighted_sum,
        pass: roundtrip_residual <= tol,
        roundtrip_residual,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityReport {
    /// Partial sums of `|b_n / phi(lambda_n)|^2` over nonzero `b_n`.
    pub partial_sums: Vec<f64>,
    pub nonzero: usize,
}

/// Partial sums of `|b_n / phi(lambda_n)|^2`. When `phi` interpolates the
/// nonzero `b_n`, each term is 1 and the sums count the nonzero targets.
pub fn density_demo(points: &PointSequence<f64>, phi: &HardyFunction, b: &CoefficientSequence) -> Result<DensityReport> {
    check_len(points, b.len())?;
    let mut partial_sums = Vec::new();
    let mut acc = 0.0;
    for ((p, v), l) in points.points().iter().zip(&b.a).zip(&b.log_abs) {
        if v.norm() == 0.0 {
            continue;
        }
        let lp = log_value(phi, *p)?;
        acc += (2.0 * (l - lp.re)).exp();
        partial_sums.push(acc);
    }
    Ok(DensityReport {
        nonzero: partial_sums.len(),
        partial_sums,
    })
}

#[cfg(test)]
mod tests;
