//! Interpolation pipelines: the finite Schur recursion, the affine circle
//! construction, k-th root bootstrapping for targets bounded above and below,
//! ratio transfer, and the growth / exact-decay constructions driven by a
//! weight profile.

mod pick;
mod pipelines;
mod targets;

use serde::{Deserialize, Serialize};

use crate::config::{Settings, Tolerances};
use crate::error::{Error, Result};
use crate::hardy::{outer_deficit, HardyExpr, HardyFunction, OuterStatus, C64};

pub use pick::{pick_matrix, pick_report, schur_interpolate, PickReport};
pub use pipelines::{
    circle_interpolate, exact_decay_interpolate, growth_interpolate, outer_interpolate_bounded_below,
    positive_interpolate, transfer_ratio, working_ladder, BootstrapResult, CircleResult, ExactDecayResult,
    GrowthResult, LadderStep, PositiveMethod, PositiveResult, TransferResult,
};
pub use targets::{TargetGenerator, TargetSequence, TargetSpec};

/// Boundary grid used for sup and positivity certificates.
pub const CERT_GRID: usize = 1 << 14;

/// Lower bound for `Re(e^(-i angle) f)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Positivity {
    pub angle: f64,
    /// Smallest sampled value on the certificate grid.
    pub grid_min: f64,
    /// Bound that holds on the whole disk, from the structure, when the
    /// structure provides one.
    pub lower_bound: Option<f64>,
    pub holds: bool,
}

/// Evidence attached to an interpolant. Every field can be recomputed from
/// the returned function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpolationCertificate {
    pub residuals_abs: Vec<f64>,
    pub residuals_rel: Vec<f64>,
    pub max_residual_rel: f64,
    /// Sampled boundary sup of `|f|` and its logarithm.
    pub sup_bound: f64,
    pub log_sup_bound: f64,
    pub grid_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_status: Option<OuterStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positivity: Option<Positivity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Residuals and boundary sup of `f` against the targets. Residuals are
/// taken in the log domain when `f` has a structural logarithm, so targets
/// that underflow still get a meaningful relative error.
pub fn residual_certificate(f: &HardyFunction, points: &[C64], targets: &TargetSequence) -> Result<InterpolationCertificate> {
    if points.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: targets.len(),
        });
    }
    let logs = targets.logs();
    let mut abs = Vec::with_capacity(points.len());
    let mut rel = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let w = targets.values[i];
        match f.log_eval(*p) {
            Ok(lf) => {
                let e = ((lf - logs[i]).exp() - 1.0).norm();
                rel.push(e);
                abs.push(e * logs[i].re.exp());
            }
            Err(Error::NoLogarithm(_)) => {
                let d = (f.eval(*p)? - w).norm();
                abs.push(d);
                rel.push(if w.norm() > 0.0 { d / w.norm() } else { d });
            }
            Err(e) => return Err(e),
        }
    }
    let lm = f.boundary_log_modulus(CERT_GRID)?;
    let log_sup = lm.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(InterpolationCertificate {
        max_residual_rel: rel.iter().copied().fold(0.0, f64::max),
        residuals_abs: abs,
        residuals_rel: rel,
        sup_bound: log_sup.exp(),
        log_sup_bound: log_sup,
        grid_points: CERT_GRID,
        outer_status: None,
        deficit: None,
        positivity: None,
        warnings: Vec::new(),
    })
}

impl InterpolationCertificate {
    /// Fills in the outer-deficit fields.
    pub fn with_deficit(mut self, f: &HardyFunction, tol: &Tolerances) -> Result<Self> {
        let rep = outer_deficit(f, tol)?;
        self.outer_status = Some(rep.status);
        self.deficit = Some(rep.deficit);
        Ok(self)
    }
}

/// Validates `expr` on the configured grid and wraps it.
fn finish(expr: HardyExpr, arg_l1: bool, arg_bounded: bool, settings: &Settings) -> Result<HardyFunction> {
    expr.validate(&settings.grid)?;
    Ok(HardyFunction {
        expr,
        arg_l1,
        arg_bounded,
        grid: settings.grid,
    })
}
