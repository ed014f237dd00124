//! Outer-deficit accounting and certified powers.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{HardyExpr, HardyFunction, OuterSpec, C64};
use crate::config::{GridConfig, Tolerances};
use crate::error::{Error, Result};
use crate::quadrature::SideMass;

/// What the deficit says about the inner factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterStatus {
    /// Outer by construction, and the deficit vanishes.
    Outer,
    /// Deficit vanishes but the structure alone does not prove outerness.
    ConsistentWithOuter,
    /// Declared inner factor or a positive deficit.
    HasInnerPart,
    /// Negative deficit or unconverged boundary mean.
    Uncertified,
}

impl OuterStatus {
    pub fn is_outer(self) -> bool {
        matches!(self, Self::Outer | Self::ConsistentWithOuter)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeficitReport {
    pub boundary_mean_log: f64,
    pub log_mod_at_0: f64,
    /// `sum log(1 / |a|)` over declared zeros.
    pub blaschke_mass: f64,
    /// Singular mass declared in the structure.
    pub declared_singular_mass: f64,
    pub deficit: f64,
    pub singular_mass_estimate: f64,
    pub inner_declared: bool,
    pub converged: bool,
    pub status: OuterStatus,
}

#[derive(Default)]
struct Declared {
    blaschke_mass: f64,
    singular_mass: f64,
    inner: bool,
}

fn declared(expr: &HardyExpr, mult: f64, acc: &mut Declared) {
    match expr {
        HardyExpr::Inner(s) => {
            acc.inner |= !s.is_trivial();
            acc.blaschke_mass += mult * s.blaschke_mass();
            acc.singular_mass += mult * s.singular_mass();
        }
        HardyExpr::ExpNegCOverGap { c } => {
            acc.inner = true;
            acc.singular_mass += mult * c / 2.0;
        }
        HardyExpr::Product { factors } => factors.iter().for_each(|f| declared(f, mult, acc)),
        HardyExpr::Power { base, exponent } => declared(base, mult * exponent, acc),
        _ => {}
    }
}

/// Singular mass declared in the structure, counted with multiplicity
/// through products and powers.
pub(crate) fn declared_singular_mass(expr: &HardyExpr) -> f64 {
    let mut d = Declared::default();
    declared(expr, 1.0, &mut d);
    d.singular_mass
}

/// Whether outerness follows from the structure alone.
fn structurally_outer(expr: &HardyExpr) -> bool {
    match expr {
        HardyExpr::Constant { value } => value.norm() > 0.0,
        HardyExpr::Outer(_) | HardyExpr::OneMinusZ | HardyExpr::ExpNegCPower { .. } | HardyExpr::Cayley { .. } => true,
        // a function with values in a half plane is outer
        HardyExpr::Affine { half_plane_angle, .. } => half_plane_angle.is_some(),
        HardyExpr::Power { base, .. } => structurally_outer(base),
        HardyExpr::Product { factors } => factors.iter().all(structurally_outer),
        HardyExpr::PowerFn { certified_outer, .. } => *certified_outer,
        HardyExpr::HalfPlane { .. } => true,
        HardyExpr::Inner(s) => s.is_trivial(),
        HardyExpr::ExpNegCOverGap { .. } | HardyExpr::Schur(_) => false,
    }
}

/// Mean of `log |f|` over the circle and whether it converged.
pub(crate) fn boundary_mean_log(expr: &HardyExpr, grid: &GridConfig) -> Result<(f64, bool)> {
    use std::f64::consts::PI;
    Ok(match expr {
        HardyExpr::Constant { value } => (value.norm().ln(), true),
        HardyExpr::Inner(_) | HardyExpr::OneMinusZ => (0.0, true),
        HardyExpr::Outer(o) => (o.mean_log_modulus(grid)?, true),
        HardyExpr::ExpNegCOverGap { c } => (-c / 2.0, true),
        HardyExpr::Cayley { coeff } => (coeff.norm().ln(), true),
        HardyExpr::ExpNegCPower { c, alpha } => {
            // (1/pi) integral_0^pi -c (2 sin(t/2))^(-alpha) cos(alpha (pi - t) / 2) dt,
            // closed near 0 with the leading-order mass
            let (c, a) = (*c, *alpha);
            let q = grid.graded::<f64>();
            let kernel = |_t: f64| Complex::new(1.0, 0.0);
            let weight = |t: f64| -c * (2.0 * (t / 2.0).sin()).powf(-a) * (a * (PI - t) / 2.0).cos();
            let mass: SideMass<f64> = std::sync::Arc::new(move |x: f64| -c * (a * PI / 2.0).cos() * x.powf(1.0 - a) / (1.0 - a));
            let v = q.toward(0.0, PI, &kernel, &weight, Some(&mass));
            (v.re / PI, true)
        }
        HardyExpr::Product { factors } => {
            let mut acc = 0.0;
            let mut ok = true;
            for f in factors {
                let (m, c) = boundary_mean_log(f, grid)?;
                acc += m;
                ok &= c;
            }
            (acc, ok)
        }
        HardyExpr::Power { base, exponent } => {
            let (m, c) = boundary_mean_log(base, grid)?;
            (exponent * m, c)
        }
        HardyExpr::Schur(_) | HardyExpr::Affine { .. } | HardyExpr::PowerFn { .. } | HardyExpr::HalfPlane { .. } => {
            numeric_mean(expr, grid)?
        }
    })
}

/// Half-shifted rectangle rule, doubled until two levels agree.
fn numeric_mean(expr: &HardyExpr, grid: &GridConfig) -> Result<(f64, bool)> {
    let mut m = 4096usize.min(grid.max_m).max(64);
    let mean = |m: usize| -> Result<f64> {
        let v = expr.boundary_log_modulus(m, true, grid)?;
        Ok(v.iter().sum::<f64>() / m as f64)
    };
    let mut prev = mean(m)?;
    while m * 2 <= grid.max_m {
        m *= 2;
        let cur = mean(m)?;
        if !cur.is_finite() {
            return Err(Error::Integrability("boundary log-modulus is not integrable on the grid".into()));
        }
        if (cur - prev).abs() <= 1e-12 * cur.abs().max(1.0) {
            return Ok((cur, true));
        }
        prev = cur;
    }
    Ok((prev, false))
}

/// `deficit = mean log |f| - log |f(0)| - sum log(1 / |a|)` over declared
/// zeros. Zero for outer functions; the singular mass for zero-free Smirnov
/// functions.
pub fn outer_deficit(f: &HardyFunction, tol: &Tolerances) -> Result<DeficitReport> {
    let grid = &f.grid;
    let mut d = Declared::default();
    declared(&f.expr, 1.0, &mut d);
    if !d.blaschke_mass.is_finite() {
        return Err(Error::Contract("a declared zero sits at the origin".into()));
    }
    let log0 = f.expr.log_modulus(C64::new(0.0, 0.0), grid)?;
    if !log0.is_finite() {
        return Err(Error::Contract("f(0) = 0; the deficit needs a nonzero value at the origin".into()));
    }
    let (mean, converged) = boundary_mean_log(&f.expr, grid)?;
    let deficit = mean - log0 - d.blaschke_mass;
    let t = tol.outer_deficit;
    let status = if !converged || deficit < -t {
        OuterStatus::Uncertified
    } else if d.inner || deficit > t {
        OuterStatus::HasInnerPart
    } else if structurally_outer(&f.expr) {
        OuterStatus::Outer
    } else {
        OuterStatus::ConsistentWithOuter
    };
    Ok(DeficitReport {
        boundary_mean_log: mean,
        log_mod_at_0: log0,
        blaschke_mass: d.blaschke_mass,
        declared_singular_mass: d.singular_mass,
        deficit,
        singular_mass_estimate: deficit,
        inner_declared: d.inner,
        converged,
        status,
    })
}

/// `f^c` for an outer `f`, with boundary log-modulus `c W`.
pub fn power_outer(f: &HardyFunction, c: f64, tol: &Tolerances) -> Result<HardyFunction> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("power exponent must be positive, got {c}")));
    }
    let rep = outer_deficit(f, tol)?;
    if !rep.status.is_outer() {
        return Err(Error::Contract(format!("power_outer needs an outer function, status is {:?}", rep.status)));
    }
    let expr = match &f.expr {
        HardyExpr::Outer(o) => HardyExpr::Outer(OuterSpec::new(o.log_modulus.clone(), o.scale * c)),
        e => HardyExpr::Power {
            base: Box::new(e.clone()),
            exponent: c,
        },
    };
    Ok(HardyFunction {
        expr,
        arg_l1: f.arg_l1,
        arg_bounded: f.arg_bounded,
        grid: f.grid,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerFnStatus {
    BoundedOuter,
    Outer,
    Uncertified,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerFnCertificate {
    pub status: PowerFnStatus,
    pub reasons: Vec<String>,
    pub min_re_psi: f64,
    pub psi_sup: f64,
    pub phi_sup: f64,
    pub arg_phi_sup: f64,
    /// `exp(|psi| log(1 + |phi|) + sup|arg phi| |psi|)`, sup norms on the grid.
    pub bound: Option<f64>,
    /// Largest `|phi^psi|` on the grid.
    pub sampled_sup: f64,
    pub grid_points: usize,
}

/// `phi^psi = exp(psi log phi)` with an outer / bounded-outer certificate.
pub fn power_fn(phi: &HardyFunction, psi: &HardyFunction, tol: &Tolerances) -> Result<(HardyFunction, PowerFnCertificate)> {
    let grid = &phi.grid;
    let m = grid.default_m;
    let mut reasons = Vec::new();
    let phi_rep = outer_deficit(phi, tol)?;
    if !phi_rep.status.is_outer() {
        reasons.push(format!("phi is not certified outer ({:?})", phi_rep.status));
    }
    let psi_bounded = psi.expr.is_bounded();
    if !psi_bounded {
        reasons.push("psi is not bounded".into());
    } else {
        let psi_rep = outer_deficit(psi, tol)?;
        if !psi_rep.status.is_outer() {
            reasons.push(format!("psi is not certified outer ({:?})", psi_rep.status));
        }
    }
    let phi_log = phi.expr.boundary_log(m, true, grid)?;
    let psi_vals = psi.expr.boundary_values(m, true, grid)?;
    let phi_sup = phi_log.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max).exp();
    let arg_phi_sup = phi_log.iter().map(|l| l.im.abs()).fold(0.0, f64::max);
    let psi_sup = psi_vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let min_re_psi = psi_vals.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    let sampled_sup = phi_log
        .iter()
        .zip(&psi_vals)
        .map(|(l, p)| (l * p).re)
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();

    let status = if !reasons.is_empty() {
        PowerFnStatus::Uncertified
    } else if phi.arg_bounded && min_re_psi > 0.0 {
        PowerFnStatus::BoundedOuter
    } else if phi.arg_l1 {
        if !phi.arg_bounded {
            reasons.push("arg phi is integrable but not known to be bounded".into());
        } else {
            reasons.push("Re psi is not positive on the grid".into());
        }
        PowerFnStatus::Outer
    } else {
        reasons.push("no integrability metadata for arg phi".into());
        PowerFnStatus::Uncertified
    };
    let bound = (status == PowerFnStatus::BoundedOuter)
        .then(|| (psi_sup * (1.0 + phi_sup).ln() + arg_phi_sup * psi_sup).exp());
    let f = HardyFunction {
        expr: HardyExpr::PowerFn {
            base: Box::new(phi.expr.clone()),
            exponent: Box::new(psi.expr.clone()),
            certified_outer: status != PowerFnStatus::Uncertified,
            certified_bounded: status == PowerFnStatus::BoundedOuter,
        },
        arg_l1: false,
        arg_bounded: false,
        grid: *grid,
    };
    Ok((
        f,
        PowerFnCertificate {
            status,
            reasons,
            min_re_psi,
            psi_sup,
            phi_sup,
            arg_phi_sup,
            bound,
            sampled_sup,
            grid_points: m,
        },
    ))
}
