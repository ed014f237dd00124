
use serde::{Deserialize, Serialize};

use super::pick::{pick_report, schur_chain};
use super::targets::check_len;
use super::{finish, residual_certificate, InterpolationCertificate, Positivity, TargetGenerator, TargetSequence, CERT_GRID};
use crate::config::Settings;
use crate::disk::{carleson_seed, separation_delta, PointSequence};
use crate::error::{Error, Result};
use crate::hardy::{power_fn, HardyExpr, HardyFunction, OuterStatus, PowerFnCertificate, PowerFnStatus, SchurChain, C64};
use crate::profile::{WeightProfile, SANDWICH_LOWER, SANDWICH_UPPER};

/// Candidate working indices, largest first: halvings of 1/2, ending at the
/// separation seed `delta^2 / 4`.
pub fn working_ladder(points: &PointSequence<f64>, steps: usize) -> Vec<f64> {
    let seed = carleson_seed(separation_delta(points).delta).unwrap_or(0.0);
    let mut out = Vec::new();
    let mut c = 0.5;
    for _ in 0..=steps {
        if c <= seed {
            break;
        }
        out.push(c);
        c /= 2.0;
    }
    if seed > 0.0 {
        out.push(seed);
    }
    out
}

/// One rung of the ladder as attempted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderStep {
    pub index: f64,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pick_min_eigenvalue: Option<f64>,
    pub accepted: bool,
}

/// Schur function through `c (w_n - a) / r`, or `None` when the scaled
/// Pick matrix is not positive semidefinite.
fn circle_step(points: &[C64], w: &[C64], a: C64, r: f64, c: f64, floor: f64) -> Result<(Option<SchurChain>, f64)> {
    let t: Vec<C64> = if r == 0.0 {
        vec![C64::new(0.0, 0.0); w.len()]
    } else {
        w.iter().map(|v| (v - a) * (c / r)).collect()
    };
    let pick = pick_report(points, &t, floor)?;
    if !pick.psd {
        return Ok((None, pick.min_eigenvalue));
    }
    match schur_chain(points, &t) {
        Ok(chain) => Ok((Some(chain), pick.min_eigenvalue)),
        Err(Error::Infeasible { .. }) => Ok((None, pick.min_eigenvalue)),
        Err(e) => Err(e),
    }
}

/// `a + (r / c) g`, asserted to stay in the half plane facing `a`.
fn affine(a: C64, r: f64, c: f64, chain: SchurChain) -> HardyExpr {
    HardyExpr::Affine {
        offset: a,
        scale: C64::new(r / c, 0.0),
        inner: Box::new(HardyExpr::Schur(chain)),
        half_plane_angle: Some(a.arg()),
    }
}

/// `Re(e^(-i arg a) phi) >= |a| - r/c` on the disk, plus the grid minimum.
fn affine_positivity(expr: &HardyExpr, a: C64, r: f64, c: f64, settings: &Settings) -> Result<Positivity> {
    let rot = C64::from_polar(1.0, -a.arg());
    let vals = expr.boundary_values(CERT_GRID, true, &settings.grid)?;
    let grid_min = vals.iter().map(|v| (v * rot).re).fold(f64::INFINITY, f64::min);
    let lower_bound = a.norm() - r / c;
    Ok(Positivity {
        angle: a.arg(),
        grid_min,
        lower_bound: Some(lower_bound),
        holds: lower_bound > 0.0 && grid_min > 0.0,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleResult {
    pub function: HardyFunction,
    pub certificate: InterpolationCertificate,
    pub working_index: f64,
    pub ladder: Vec<LadderStep>,
}

/// Bounded outer interpolant for targets in the closed disk `D(a, r)` with
/// `r < |a|`: `a + (r/C) g` with `g` a Schur interpolant of the rescaled
/// targets. `C` walks down the working ladder until the Pick test passes.
pub fn circle_interpolate(
    points: &PointSequence<f64>,
    targets: &TargetSequence,
    a: C64,
    r: f64,
    settings: &Settings,
) -> Result<CircleResult> {
    check_len(points, targets.len())?;
    if !(a.is_finite() && a.norm() > 0.0) {
        return Err(Error::Domain("circle centre must be finite and nonzero".into()));
    }
    if !(r >= 0.0 && r.is_finite() && r < a.norm()) {
        return Err(Error::Domain(format!("radius {r} must satisfy 0 <= r < |a| = {}", a.norm())));
    }
    let slack = 1e-12 * a.norm();
    if let Some(w) = targets.values.iter().find(|w| (*w - a).norm() > r + slack) {
        return Err(Error::Domain(format!("target {w} lies outside the disk of radius {r} about {a}")));
    }
    let mut steps = Vec::new();
    for c in working_ladder(points, settings.tol.ladder_steps) {
        if r / a.norm() >= c {
            break;
        }
        let (chain, eig) = circle_step(points.points(), &targets.values, a, r, c, settings.tol.pick_floor)?;
        steps.push(LadderStep {
            index: c,
            radius: r,
            root: None,
            pick_min_eigenvalue: Some(eig),
            accepted: chain.is_some(),
        });
        if let Some(chain) = chain {
            let expr = affine(a, r, c, chain);
            let positivity = affine_positivity(&expr, a, r, c, settings)?;
            let function = finish(expr, true, true, settings)?;
            let mut certificate = residual_certificate(&function, points.points(), targets)?.with_deficit(&function, &settings.tol)?;
            certificate.positivity = Some(positivity);
            return Ok(CircleResult {
                function,
                certificate,
                working_index: c,
                ladder: steps,
            });
        }
    }
    Err(Error::Infeasible {
        reason: format!("no working index above r/|a| = {} passed the Pick test", r / a.norm()),
        ladder: steps.iter().map(|s| s.index).collect(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub function: HardyFunction,
    pub certificate: InterpolationCertificate,
    pub working_index: f64,
    pub radius: f64,
    pub root: u64,
    pub ladder: Vec<LadderStep>,
}

/// Smallest `k <= max_root` with `max |exp(L_n / k) - 1| <= r`.
fn smallest_root(logs: &[C64], r: f64, max_root: u64) -> Option<u64> {
    (1..=max_root).find(|&k| logs.iter().all(|l| ((l / k as f64).exp() - 1.0).norm() <= r))
}

/// Bounded outer interpolant for targets with `0 < m <= |w_n| <= M`:
/// principal k-th roots land in `D(1, r)`, the circle construction handles
/// those, and the result is raised back to the k-th power.
pub fn outer_interpolate_bounded_below(
    points: &PointSequence<f64>,
    targets: &TargetSequence,
    settings: &Settings,
) -> Result<BootstrapResult> {
    let tol = &settings.tol;
    check_len(points, targets.len())?;
    let (lo, hi) = targets.log_bounds();
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("targets must be finite and nonzero".into()));
    }
    if hi - lo > tol.modulus_span.ln() {
        return Err(Error::Domain(format!(
            "target moduli span a factor {:.3e}, above the limit {:.3e}",
            (hi - lo).exp(),
            tol.modulus_span
        )));
    }
    let logs = targets.logs();
    let one = C64::new(1.0, 0.0);
    let mut steps = Vec::new();
    let mut last = (0.0, 0);
    for c in working_ladder(points, tol.ladder_steps) {
        let r = tol.radius_fraction * c;
        let Some(k) = smallest_root(&logs, r, tol.max_root) else {
            steps.push(LadderStep {
                index: c,
                radius: r,
                root: None,
                pick_min_eigenvalue: None,
                accepted: false,
            });
            last = (r, tol.max_root);
            continue;
        };
        last = (r, k);
        let roots: Vec<C64> = logs.iter().map(|l| (l / k as f64).exp()).collect();
        let (chain, eig) = circle_step(points.points(), &roots, one, r, c, tol.pick_floor)?;
        steps.push(LadderStep {
            index: c,
            radius: r,
            root: Some(k),
            pick_min_eigenvalue: Some(eig),
            accepted: chain.is_some(),
        });
        let Some(chain) = chain else { continue };
        let g = affine(one, r, c, chain);
        let positivity = affine_positivity(&g, one, r, c, settings)?;
        let expr = if k == 1 {
            g
        } else {
            HardyExpr::Power {
                base: Box::new(g),
                exponent: k as f64,
            }
        };
        // |arg g| < pi/2, so |arg g^k| < k pi/2
        let function = finish(expr, true, true, settings)?;
        let mut certificate = residual_certificate(&function, points.points(), targets)?.with_deficit(&function, tol)?;
        certificate.positivity = Some(positivity);
        return Ok(BootstrapResult {
            function,
            certificate,
            working_index: c,
            radius: r,
            root: k,
            ladder: steps,
        });
    }
    Err(Error::LadderExhausted { r: last.0, k: last.1 })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferResult {
    pub function: HardyFunction,
    pub certificate: InterpolationCertificate,
    pub factor: BootstrapResult,
}

/// `base * F` with `F` interpolating `to / from`; hits `to` whenever `base`
/// hits `from`.
pub fn transfer_ratio(
    points: &PointSequence<f64>,
    from: &TargetSequence,
    to: &TargetSequence,
    base: &HardyFunction,
    settings: &Settings,
) -> Result<TransferResult> {
    check_len(points, from.len())?;
    check_len(points, to.len())?;
    let log_modulus: Vec<f64> = to.log_modulus.iter().zip(&from.log_modulus).map(|(a, b)| a - b).collect();
    if log_modulus.iter().any(|l| !l.is_finite()) {
        return Err(Error::Domain("ratio targets must be finite and nonzero".into()));
    }
    let values = to
        .values
        .iter()
        .zip(&from.values)
        .zip(&log_modulus)
        .map(|((t, f), l)| C64::from_polar(l.exp(), t.arg() - f.arg()))
        .collect();
    let ratios = TargetSequence {
        values,
        log_modulus,
        generator: None,
    };
    let factor = outer_interpolate_bounded_below(points, &ratios, settings)?;
    let expr = HardyExpr::Product {
        factors: vec![base.expr.clone(), factor.function.expr.clone()],
    };
    let function = finish(expr, base.arg_l1, base.arg_bounded, settings)?;
    let certificate = residual_certificate(&function, points.points(), to)?.with_deficit(&function, &settings.tol)?;
    Ok(TransferResult {
        function,
        certificate,
        factor,
    })
}

/// `exp(-H[h(|t|)])` and its values at real nodes. The imaginary part of
/// the logarithm vanishes by symmetry; anything above `1e-10` is a
/// quadrature failure.
fn profile_outer(points: &PointSequence<f64>, h: &WeightProfile, settings: &Settings) -> Result<(HardyFunction, Vec<f64>)> {
    if !points.is_real_increasing() {
        return Err(Error::Contract("profile constructions need real increasing nodes in (0, 1)".into()));
    }
    let phi = HardyFunction::outer_from_profile(h, 1.0, settings.grid.default_m)?.with_grid(settings.grid);
    let mut logs = Vec::with_capacity(points.len());
    for p in points.points() {
        let l = phi.log_eval(*p)?;
        if l.im.abs() > 1e-10 {
            return Err(Error::Accuracy(format!("log of the profile outer function at {} has imaginary part {:.3e}", p.re, l.im)));
        }
        logs.push(l.re);
    }
    Ok((phi, logs))
}

fn sandwich_check(value: f64, slack: f64) -> Result<()> {
    if !(value >= SANDWICH_LOWER - slack && value <= SANDWICH_UPPER + slack) {
        return Err(Error::SandwichViolation {
            lower: SANDWICH_LOWER,
            value,
            upper: SANDWICH_UPPER,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthResult {
    pub phi0: HardyFunction,
    /// `-(1 - lambda) log |phi0(lambda)| / integral_0^(1-lambda) h`.
    pub ratios: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub psi: HardyFunction,
    pub certificate: InterpolationCertificate,
}

/// Outer function with `log |phi0(lambda_n)|` comparable to
/// `-(1/(1-lambda_n)) integral_0^(1-lambda_n) h`, then transferred onto the
/// positive values `|phi0(lambda_n)|`.
pub fn growth_interpolate(points: &PointSequence<f64>, h: &WeightProfile, settings: &Settings) -> Result<GrowthResult> {
    let (phi0, logs) = profile_outer(points, h, settings)?;
    let mut ratios = Vec::with_capacity(logs.len());
    for (p, l) in points.points().iter().zip(&logs) {
        let g = 1.0 - p.re;
        let r = -g * l / h.integral(g)?;
        sandwich_check(r, settings.tol.sandwich)?;
        ratios.push(r);
    }
    let from = TargetSequence {
        values: logs.iter().map(|l| C64::new(l.exp(), 0.0)).collect(),
        log_modulus: logs.clone(),
        generator: None,
    };
    let to = TargetSequence {
        values: from.values.iter().map(|v| C64::new(v.norm(), 0.0)).collect(),
        ..from.clone()
    };
    let t = transfer_ratio(points, &from, &to, &phi0, settings)?;
    Ok(GrowthResult {
        phi0,
        ratios,
        lower: SANDWICH_LOWER,
        upper: SANDWICH_UPPER,
        psi: t.function,
        certificate: t.certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositiveMethod {
    /// `a + (r/C) g` about the midpoint of the value range.
    Circle,
    /// `c (1 + S) / (1 - S)` with a Schur function `S`.
    HalfPlane,
    /// Neither applies: bounded outer interpolant from the k-th root
    /// construction, with no positivity claim.
    Bootstrap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositiveResult {
    pub function: HardyFunction,
    pub method: PositiveMethod,
    pub positivity: Positivity,
    pub certificate: InterpolationCertificate,
}

/// Bounded outer interpolant with positive real part for positive targets.
/// The circle construction is tried first; when the value range is too
/// wide for the working index, the targets are pulled back through the
/// Cayley map and interpolated by a Schur function with sup below one.
pub fn positive_interpolate(points: &PointSequence<f64>, values: &[f64], settings: &Settings) -> Result<PositiveResult> {
    check_len(points, values.len())?;
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("positive interpolation needs positive targets, got {v}")));
    }
    let targets = TargetSequence::from_values(values.iter().map(|v| C64::new(*v, 0.0)).collect())?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let a = C64::new((lo + hi) / 2.0, 0.0);
    match circle_interpolate(points, &targets, a, (hi - lo) / 2.0, settings) {
        Ok(c) => {
            let positivity = c.certificate.positivity.clone().expect("circle certificate carries positivity");
            return Ok(PositiveResult {
                function: c.function,
                method: PositiveMethod::Circle,
                positivity,
                certificate: c.certificate,
            });
        }
        Err(Error::Infeasible { .. }) => {}
        Err(e) => return Err(e),
    }
    let c0 = (lo * hi).sqrt();
    let s: Vec<C64> = values.iter().map(|v| C64::new((v / c0 - 1.0) / (v / c0 + 1.0), 0.0)).collect();
    let pick = pick_report(points.points(), &s, settings.tol.pick_floor)?;
    if !pick.psd {
        return Err(Error::Infeasible {
            reason: format!("Cayley-transformed targets fail the Pick test (eigenvalue {:.3e})", pick.min_eigenvalue),
            ladder: Vec::new(),
        });
    }
    let chain = schur_chain(points.points(), &s)?;
    if chain.tail.norm() >= 1.0 {
        return Err(Error::Infeasible {
            reason: "Cayley-transformed targets force a Blaschke product, which is unbounded after the map".into(),
            ladder: Vec::new(),
        });
    }
    let inner = HardyExpr::Schur(chain);
    let s_sup = inner
        .boundary_values(CERT_GRID, true, &settings.grid)?
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let expr = HardyExpr::HalfPlane {
        coeff: c0,
        inner: Box::new(inner),
    };
    let grid_min = expr
        .boundary_values(CERT_GRID, true, &settings.grid)?
        .iter()
        .map(|v| v.re)
        .fold(f64::INFINITY, f64::min);
    // Re (1 + s) / (1 - s) >= (1 - |s|) / (1 + |s|)
    let lower_bound = c0 * (1.0 - s_sup) / (1.0 + s_sup);
    let positivity = Positivity {
        angle: 0.0,
        grid_min,
        lower_bound: Some(lower_bound),
        holds: s_sup < 1.0 && grid_min > 0.0,
    };
    let function = finish(expr, true, true, settings)?;
    let mut certificate = residual_certificate(&function, points.points(), &targets)?.with_deficit(&function, &settings.tol)?;
    certificate.positivity = Some(positivity.clone());
    Ok(PositiveResult {
        function,
        method: PositiveMethod::HalfPlane,
        positivity,
        certificate,
    })
}

fn bootstrap_psi(points: &PointSequence<f64>, values: &[f64], settings: &Settings) -> Result<PositiveResult> {
    let targets = TargetSequence::from_values(values.iter().map(|v| C64::new(*v, 0.0)).collect())?;
    let b = outer_interpolate_bounded_below(points, &targets, settings)?;
    let grid_min = b
        .function
        .boundary_values(CERT_GRID)?
        .iter()
        .map(|v| v.re)
        .fold(f64::INFINITY, f64::min);
    let mut certificate = b.certificate;
    certificate.warnings.push("no positive-real-part interpolant found; psi carries no positivity bound".into());
    Ok(PositiveResult {
        function: b.function,
        method: PositiveMethod::Bootstrap,
        positivity: Positivity {
            angle: 0.0,
            grid_min,
            lower_bound: None,
            holds: false,
        },
        certificate,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactDecayResult {
    pub function: HardyFunction,
    /// Profile case: `log phi0(lambda_n) / log w_n`, inside the sandwich.
    /// Gap-power case: the exponents themselves.
    pub d: Vec<f64>,
    pub psi: PositiveResult,
    pub power: PowerFnCertificate,
    pub certificate: InterpolationCertificate,
}

/// `f = phi^psi` with `f(lambda_n) = w_n` exactly. For `profile_decay(h)`
/// targets `phi = exp(-H[h(|t|)])`; for `gap_power(d)` targets `phi = 1 - z`.
pub fn exact_decay_interpolate(
    points: &PointSequence<f64>,
    generator: &TargetGenerator,
    settings: &Settings,
) -> Result<ExactDecayResult> {
    if !points.is_real_increasing() {
        return Err(Error::Contract("exact-decay construction needs real increasing nodes in (0, 1)".into()));
    }
    let targets = TargetSequence::from_generator(points, generator.clone())?;
    let (phi, d, psi_targets) = match generator {
        TargetGenerator::ProfileDecay { h } => {
            let (phi, logs) = profile_outer(points, h, settings)?;
            let mut d = Vec::with_capacity(logs.len());
            for (l, lw) in logs.iter().zip(&targets.log_modulus) {
                let dn = l / lw;
                sandwich_check(dn, settings.tol.sandwich)?;
                d.push(dn);
            }
            let inv = d.iter().map(|x| 1.0 / x).collect();
            (phi, d, inv)
        }
        TargetGenerator::GapPower { d } => (HardyFunction::one_minus_z().with_grid(settings.grid), d.clone(), d.clone()),
        other => {
            return Err(Error::Contract(format!("no exact-decay construction for {} targets", other.name())));
        }
    };
    let psi = match positive_interpolate(points, &psi_targets, settings) {
        Ok(p) => p,
        Err(e) if e.is_infeasible() => bootstrap_psi(points, &psi_targets, settings)?,
        Err(e) => return Err(e),
    };
    let (function, power) = power_fn(&phi, &psi.function, &settings.tol)?;
    let mut certificate = residual_certificate(&function, points.points(), &targets)?;
    certificate.outer_status = Some(match power.status {
        PowerFnStatus::BoundedOuter | PowerFnStatus::Outer => OuterStatus::Outer,
        PowerFnStatus::Uncertified => OuterStatus::Uncertified,
    });
    certificate.positivity = Some(psi.positivity.clone());
    certificate.warnings.extend(power.reasons.iter().cloned());
    Ok(ExactDecayResult {
        function,
        d,
        psi,
        power,
        certificate,
    })
}

