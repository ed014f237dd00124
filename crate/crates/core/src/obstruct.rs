//! Diagnostics for targets that no outer function can interpolate, and
//! for functions whose radial decay betrays an inner factor.

use serde::{Deserialize, Serialize};

use crate::boundary::{rearrange_decreasing, BoundaryFunction};
use crate::config::Tolerances;
use crate::disk::PointSequence;
use crate::error::{Error, Result};
use crate::hardy::{atom_kernel, blaschke_factor, declared_singular_mass, HardyExpr, HardyFunction, C64};
use crate::interp::{TargetGenerator, TargetSequence};
use crate::profile::SANDWICH_UPPER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    /// `s_n -> 0`: no obstruction.
    OuterPossible,
    /// `s_n` tends to a nonzero limit: every interpolant has an inner factor.
    InnerForced,
    /// `s_n` is unbounded: every interpolant has zeros.
    BlaschkeForced,
    /// Finite data without a generator says nothing about the limit.
    Inconclusive,
}

/// `s_n = (1 - |lambda_n|) log |w_n|` and what its limit forces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    pub s_values: Vec<f64>,
    /// Largest `|s_n|` over the last quarter of the nodes.
    pub tail_estimate: f64,
    /// Limit of `s_n` implied by the generator, when finite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    pub classification: DecayClass,
    pub reason: String,
}

fn tail<T: Copy>(v: &[T], n: usize) -> &[T] {
    &v[v.len().saturating_sub(n)..]
}

pub fn classify_decay(points: &PointSequence<f64>, targets: &TargetSequence) -> Result<DecayReport> {
    if points.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: targets.len(),
        });
    }
    if let Some(i) = targets.log_modulus.iter().position(|l| !l.is_finite()) {
        return Err(Error::Domain(format!("target {i} is zero or not finite")));
    }
    let s_values: Vec<f64> = points
        .points()
        .iter()
        .zip(&targets.log_modulus)
        .map(|(p, l)| (1.0 - p.norm()) * l)
        .collect();
    let quarter = s_values.len().div_ceil(4);
    let tail_estimate = tail(&s_values, quarter).iter().fold(0.0, |a: f64, s| a.max(s.abs()));
    let (classification, limit, reason) = match &targets.generator {
        Some(TargetGenerator::ExpNegCOverGap { c }) => {
            (DecayClass::InnerForced, Some(-c), format!("s_n = -{c} for every n"))
        }
        Some(TargetGenerator::ExpNegCOverGapSq { c }) => {
            (DecayClass::BlaschkeForced, None, format!("s_n = -{c} / (1 - |lambda_n|) is unbounded"))
        }
        Some(TargetGenerator::GapPower { .. }) => {
            (DecayClass::OuterPossible, Some(0.0), "s_n = d_n gap log(gap) with bounded d_n".into())
        }
        Some(TargetGenerator::ProfileDecay { .. }) => {
            (DecayClass::OuterPossible, Some(0.0), "s_n = -integral_0^gap h, which tends to 0".into())
        }
        Some(TargetGenerator::BoundedModulus { .. }) => {
            (DecayClass::OuterPossible, Some(0.0), "log |w_n| is bounded".into())
        }
        None => (DecayClass::Inconclusive, None, "no generator: the limit of s_n is not determined by finite data".into()),
    };
    Ok(DecayReport {
        s_values,
        tail_estimate,
        limit,
        classification,
        reason,
    })
}

/// Radii `1 - 2^(-j)`, `j = 1..=depth`, along the ray at `angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadialSchedule {
    pub depth: usize,
    pub angle: f64,
}

impl Default for RadialSchedule {
    fn default() -> Self {
        Self { depth: 40, angle: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialSeries {
    pub angle: f64,
    pub j: Vec<usize>,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// The schedule stopped early because evaluation lost accuracy.
    pub truncated: bool,
}

impl RadialSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,r,value\n");
        for i in 0..self.j.len() {
            out.push_str(&format!("{},{},{}\n", self.j[i], self.radii[i], self.values[i]));
        }
        out
    }
}

/// `(1 - r) g(log |f(r e^(i angle))|)` along the schedule.
fn radial_series(f: &HardyFunction, schedule: &RadialSchedule, g: impl Fn(f64) -> f64) -> Result<RadialSeries> {
    let mut s = RadialSeries {
        angle: schedule.angle,
        j: Vec::new(),
        radii: Vec::new(),
        values: Vec::new(),
        truncated: false,
    };
    for j in 1..=schedule.depth {
        let gap = 0.5f64.powi(j as i32);
        let r = 1.0 - gap;
        match f.log_modulus(C64::from_polar(r, schedule.angle)) {
            Ok(l) => {
                s.j.push(j);
                s.radii.push(r);
                s.values.push(gap * g(l));
            }
            Err(Error::Accuracy(_)) if s.j.len() >= 5 => {
                s.truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if s.j.len() < 5 {
        return Err(Error::Contract("radial schedule needs at least 5 radii".into()));
    }
    Ok(s)
}

/// Last three steps do not grow beyond rounding.
fn shrinking(v: &[f64]) -> bool {
    tail(v, 4).windows(2).all(|w| w[1].abs() <= w[0].abs() + 1e-12 * w[0].abs().max(1.0))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialDecayReport {
    pub series: RadialSeries,
    /// Largest `|value|` over the last five radii.
    pub tail_max: f64,
    pub shrinking: bool,
    pub pass: bool,
}

/// Outer functions satisfy `(1 - r) log |f(r zeta)| -> 0`; a persistent
/// nonzero value is evidence of a singular inner factor.
pub fn radial_outer_decay_check(f: &HardyFunction, schedule: &RadialSchedule, tol: &Tolerances) -> Result<RadialDecayReport> {
    let series = radial_series(f, schedule, |l| l)?;
    let tail_max = tail(&series.values, 5).iter().fold(0.0, |a: f64, v| a.max(v.abs()));
    let shrinking = shrinking(&series.values);
    Ok(RadialDecayReport {
        pass: tail_max <= tol.decay && shrinking,
        tail_max,
        shrinking,
        series,
    })
}

/// Whether the structure may vanish somewhere in the disk.
fn may_vanish(expr: &HardyExpr) -> bool {
    match expr {
        HardyExpr::Constant { value } => value.norm() == 0.0,
        HardyExpr::Inner(s) => !s.zeros.is_empty(),
        HardyExpr::Schur(_) => true,
        HardyExpr::Affine { half_plane_angle, .. } => half_plane_angle.is_none(),
        HardyExpr::Power { base, .. } => may_vanish(base),
        HardyExpr::Product { factors } => factors.iter().any(may_vanish),
        _ => false,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroFreeReport {
    pub singular_mass: f64,
    /// `2 mu(T)`.
    pub bound: f64,
    /// `(1 - r) |log |f||` along the schedule.
    pub series: RadialSeries,
    /// `max(0, value - bound)` per radius.
    pub excess: Vec<f64>,
    pub tail_excess: f64,
    pub pass: bool,
}

/// For zero-free `f` with singular mass `mu`, `(1 - r) |log |f(r zeta)||`
/// is eventually at most `2 mu`; the excess must die out along the schedule.
pub fn zero_free_envelope_check(f: &HardyFunction, schedule: &RadialSchedule, tol: &Tolerances) -> Result<ZeroFreeReport> {
    if may_vanish(&f.expr) {
        return Err(Error::Contract("zero-free check needs a model without zeros".into()));
    }
    let singular_mass = declared_singular_mass(&f.expr);
    let bound = 2.0 * singular_mass;
    let series = radial_series(f, schedule, f64::abs)?;
    let excess: Vec<f64> = series.values.iter().map(|v| (v - bound).max(0.0)).collect();
    let tail_excess = tail(&excess, 5).iter().fold(0.0, |a: f64, v| a.max(*v));
    Ok(ZeroFreeReport {
        pass: tail_excess <= tol.decay && shrinking(&excess),
        singular_mass,
        bound,
        series,
        excess,
        tail_excess,
    })
}

/// `log |I(z)|` for the declared inner part, `None` if there is none.
fn inner_log_modulus(expr: &HardyExpr, z: C64) -> Option<f64> {
    match expr {
        HardyExpr::Inner(s) if !s.is_trivial() => {
            let b: f64 = s.zeros.iter().map(|a| blaschke_factor(*a, z).norm().ln()).sum();
            let a: f64 = s.atoms.iter().map(|at| -at.mass * atom_kernel(at.zeta, z).re).sum();
            Some(a + b)
        }
        // exp(-c/(1-z)) = exp(-c/2) exp(-(c/2)(1+z)/(1-z))
        HardyExpr::ExpNegCOverGap { c } => Some(-c / 2.0 * atom_kernel(C64::new(1.0, 0.0), z).re),
        HardyExpr::Power { base, exponent } => inner_log_modulus(base, z).map(|l| exponent * l),
        HardyExpr::Product { factors } => {
            factors.iter().filter_map(|f| inner_log_modulus(f, z)).fold(None, |acc, l| Some(acc.unwrap_or(0.0) + l))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiminfReport {
    pub log_moduli: Vec<f64>,
    /// Smallest `|I(lambda_n)|` in each of up to four consecutive windows.
    pub window_mins: Vec<f64>,
    /// Minimum over the last window.
    pub estimate: f64,
}

/// `|I(lambda_n)|` for the declared inner factor `I` of `f`.
pub fn inner_liminf_check(points: &PointSequence<f64>, f: &HardyFunction) -> Result<LiminfReport> {
    let mut log_moduli = Vec::with_capacity(points.len());
    for p in points.points() {
        match inner_log_modulus(&f.expr, *p) {
            Some(l) => log_moduli.push(l),
            None => return Err(Error::Contract("the model declares no inner part".into())),
        }
    }
    let width = log_moduli.len().div_ceil(4);
    let window_mins: Vec<f64> = log_moduli
        .chunks(width)
        .map(|w| w.iter().copied().fold(f64::INFINITY, f64::min).exp())
        .collect();
    let estimate = *window_mins.last().expect("nonempty point sequence");
    Ok(LiminfReport {
        log_moduli,
        window_mins,
        estimate,
    })
}

/// Decreasing envelope built from an interpolant and its per-node slack.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeResult {
    /// Width in `t` of each step of `h`.
    pub cell_width: f64,
    /// `h` on `[0, 1]`: `((2 + pi) / pi) k*`, one value per step.
    pub h_samples: Vec<f64>,
    /// `integral_0^(1 - lambda_n) h`.
    pub integrals: Vec<f64>,
    /// `integral_0^(1 - lambda_n) h + (1 - lambda_n) log |w_n / M|`.
    pub margins: Vec<f64>,
    pub min_margin: f64,
    pub pass: bool,
}

/// Envelope for targets `w_n` from the boundary log-modulus of an outer
/// interpolant `psi` of `w_n / M`. `k = max(0, -log |psi|)` is rearranged;
/// the samples only matter through their distribution, so any rotation of
/// the grid gives the same result.
pub fn rearranged_envelope(points: &PointSequence<f64>, targets: &TargetSequence, psi_log_modulus: &BoundaryFunction<f64>) -> Result<EnvelopeResult> {
    if points.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: targets.len(),
        });
    }
    if targets.log_modulus.iter().any(|l| !l.is_finite()) {
        return Err(Error::Domain("targets must be finite and nonzero".into()));
    }
    if psi_log_modulus.samples().iter().any(|v| !v.is_finite()) {
        return Err(Error::Integrability("log |psi| has non-finite samples".into()));
    }
    let m = psi_log_modulus.m();
    let k: Vec<f64> = psi_log_modulus.samples().iter().map(|w| (-w).max(0.0)).collect();
    let star = rearrange_decreasing(&BoundaryFunction::from_samples(k, false)?)?;
    let mut sorted = star.star_samples;
    sorted.sort_by(|a, b| b.total_cmp(a));
    // each sample covers 2 pi / m of the circle, half of it on each side
    let cell = std::f64::consts::PI / m as f64;
    let mut prefix = vec![0.0; m + 1];
    for i in 0..m {
        prefix[i + 1] = prefix[i] + sorted[i];
    }
    if !prefix[m].is_finite() {
        return Err(Error::Integrability("k is not integrable".into()));
    }
    let integral = |g: f64| {
        let x = g / cell;
        let q = (x.floor() as usize).min(m);
        let frac = if q < m { (x - q as f64) * sorted[q] } else { 0.0 };
        SANDWICH_UPPER * cell * (prefix[q] + frac)
    };
    let (_, log_m) = targets.log_bounds();
    let mut integrals = Vec::with_capacity(points.len());
    let mut margins = Vec::with_capacity(points.len());
    for (p, l) in points.points().iter().zip(&targets.log_modulus) {
        let g = 1.0 - p.norm();
        let i = integral(g);
        integrals.push(i);
        margins.push(i + g * (l - log_m));
    }
    let steps = ((1.0 / cell).ceil() as usize).min(m);
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(EnvelopeResult {
        cell_width: cell,
        h_samples: sorted[..steps].iter().map(|v| SANDWICH_UPPER * v).collect(),
        integrals,
        margins,
        pass: min_margin >= -1e-8,
        min_margin,
    })
}

/// [`rearranged_envelope`] with the boundary data sampled from `psi` on `m`
/// half-shifted points.
pub fn rearranged_envelope_for(points: &PointSequence<f64>, targets: &TargetSequence, psi: &HardyFunction, m: usize) -> Result<EnvelopeResult> {
    let w = BoundaryFunction::from_samples(psi.boundary_log_modulus(m)?, false)?;
    rearranged_envelope(points, targets, &w)
}
