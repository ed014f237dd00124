use std::collections::BTreeMap;

use hardy_interp::boundary::{grid_angle, hl_pairing_check, rearrange_decreasing, BoundaryFunction};
use hardy_interp::config::Settings;
use hardy_interp::disk::{separation_delta, PointSequence, PointSequenceSpec};
use hardy_interp::hardy::{outer_deficit, HardyFunction, OuterStatus};
use hardy_interp::interp::{
    circle_interpolate, exact_decay_interpolate, growth_interpolate, outer_interpolate_bounded_below, pick_matrix,
    positive_interpolate, schur_interpolate, working_ladder, InterpolationCertificate, TargetGenerator, TargetSpec,
};
use hardy_interp::model_space::{
    membership_tests, range_description_check, sufficient_class_check, toeplitz_apply, CoeffSpec, FourierGrid,
    FourierReport,
};
use hardy_interp::obstruct::{classify_decay, rearranged_envelope_for, radial_outer_decay_check, zero_free_envelope_check, RadialSchedule};
use hardy_interp::profile::{a_h, WeightProfile};
use hardy_interp::{Error, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{CliError, CommandName, Series, Status};

#[derive(Default)]
pub(crate) struct Report {
    pub outputs: BTreeMap<String, Value>,
    pub certificates: BTreeMap<String, Value>,
    pub series: BTreeMap<String, Series>,
    pub diagnostics: Vec<String>,
    pub status: Status,
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

impl Report {
    fn output<T: Serialize>(&mut self, key: &str, v: &T) {
        self.outputs.insert(key.into(), json(v));
    }

    fn certificate<T: Serialize>(&mut self, key: &str, v: &T) {
        self.certificates.insert(key.into(), json(v));
    }

    /// Keeps the most severe status seen.
    fn flag(&mut self, status: Status, why: impl Into<String>) {
        self.status = self.status.max(status);
        self.diagnostics.push(why.into());
    }

    fn check_interpolation(&mut self, key: &str, c: &InterpolationCertificate) {
        self.certificate(key, c);
        if let Some(p) = &c.positivity {
            if !p.holds {
                self.flag(Status::Uncertified, format!("{key}: positivity certificate does not hold"));
            }
        }
        if matches!(c.outer_status, Some(OuterStatus::Uncertified | OuterStatus::HasInnerPart)) {
            self.flag(Status::Uncertified, format!("{key}: outer status {:?}", c.outer_status.unwrap()));
        }
        for w in &c.warnings {
            self.diagnostics.push(format!("{key}: {w}"));
        }
    }
}

fn payload<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("payload: {e}")))
}

/// Deserialized functions skip validation and the grid; redo both.
fn function(f: &HardyFunction, settings: &Settings) -> hardy_interp::Result<HardyFunction> {
    let f = HardyFunction::new(f.expr.clone(), f.arg_l1, f.arg_bounded)?.with_grid(settings.grid);
    f.expr.validate(&settings.grid)?;
    Ok(f)
}

pub(crate) fn dispatch(command: CommandName, body: &Value, settings: &Settings) -> Result<Report, CliError> {
    let result = match command {
        CommandName::Sequence => sequence(payload(body)?, settings),
        CommandName::Pick => pick(payload(body)?, settings),
        CommandName::Construct => construct(payload(body)?, settings),
        CommandName::Diagnose => diagnose(payload(body)?, settings),
        CommandName::Modelspace => modelspace(payload(body)?, settings),
        CommandName::Rearrange => rearrange(payload(body)?),
    };
    match result {
        Ok(r) => Ok(r),
        Err(e) if e.is_infeasible() => {
            let mut r = Report::default();
            if let Error::Infeasible { ladder, .. } = &e {
                r.certificate("ladder", ladder);
            }
            r.flag(Status::Infeasible, e.to_string());
            Ok(r)
        }
        Err(e) if e.is_numerical() || matches!(e, Error::NoLogarithm(_)) => {
            let mut r = Report::default();
            r.flag(Status::NumericFailure, e.to_string());
            Ok(r)
        }
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequencePayload {
    points: PointSequenceSpec,
}

fn sequence(p: SequencePayload, settings: &Settings) -> hardy_interp::Result<Report> {
    let pts = p.points.build()?;
    let mut r = Report::default();
    r.output("points", &pts.to_spec());
    r.output("separation", &separation_delta(&pts));
    r.output("working_ladder", &working_ladder(&pts, settings.tol.ladder_steps));
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PickPayload {
    points: PointSequenceSpec,
    targets: TargetSpec,
    /// Also build the Schur interpolant when the Pick test passes.
    #[serde(default)]
    solve: bool,
}

fn pick(p: PickPayload, settings: &Settings) -> hardy_interp::Result<Report> {
    let pts = p.points.build()?;
    let w = p.targets.build(&pts)?;
    let report = pick_matrix(&pts, &w, &settings.tol)?;
    let mut r = Report::default();
    r.certificate("pick", &report);
    if !report.psd {
        r.flag(Status::Infeasible, format!("Pick matrix has eigenvalue {:e}", report.min_eigenvalue));
        return Ok(r);
    }
    if p.solve {
        let (f, cert) = schur_interpolate(&pts, &w, settings)?;
        r.check_interpolation("interpolation", &cert);
        boundary_series(&mut r, &f, settings)?;
        r.output("function", &f);
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
enum ConstructPayload {
    Schur {
        points: PointSequenceSpec,
        targets: TargetSpec,
    },
    Circle {
        points: PointSequenceSpec,
        targets: TargetSpec,
        center: C64,
        radius: f64,
    },
    BoundedBelow {
        points: PointSequenceSpec,
        targets: TargetSpec,
    },
    Growth {
        points: PointSequenceSpec,
        profile: WeightProfile,
        /// Grid for the envelope check on the growth interpolant.
        #[serde(default = "envelope_m")]
        envelope_m: usize,
    },
    ExactDecay {
        points: PointSequenceSpec,
        generator: TargetGenerator,
    },
    Positive {
        points: PointSequenceSpec,
        values: Vec<f64>,
    },
}

fn envelope_m() -> usize {
    1 << 16
}

/// Boundary values of `f` on the half-shifted default grid.
fn boundary_series(r: &mut Report, f: &HardyFunction, settings: &Settings) -> hardy_interp::Result<()> {
    let m = settings.grid.default_m;
    let v = f.boundary_values(m)?;
    let mut s = Series::new(&["theta", "re", "im", "abs"]);
    for (j, z) in v.iter().enumerate() {
        s.push(vec![grid_angle::<f64>(m, j, true), z.re, z.im, z.norm()]);
    }
    r.series.insert("boundary".into(), s);
    Ok(())
}

fn construct(p: ConstructPayload, settings: &Settings) -> hardy_interp::Result<Report> {
    let mut r = Report::default();
    let f = match p {
        ConstructPayload::Schur { points, targets } => {
            let pts = points.build()?;
            let (f, cert) = schur_interpolate(&pts, &targets.build(&pts)?, settings)?;
            r.check_interpolation("interpolation", &cert);
            f
        }
        ConstructPayload::Circle {
            points,
            targets,
            center,
            radius,
        } => {
            let pts = points.build()?;
            let res = circle_interpolate(&pts, &targets.build(&pts)?, center, radius, settings)?;
            r.check_interpolation("interpolation", &res.certificate);
            r.certificate("ladder", &res.ladder);
            r.output("working_index", &res.working_index);
            res.function
        }
        ConstructPayload::BoundedBelow { points, targets } => {
            let pts = points.build()?;
            let res = outer_interpolate_bounded_below(&pts, &targets.build(&pts)?, settings)?;
            r.check_interpolation("interpolation", &res.certificate);
            r.certificate("ladder", &res.ladder);
            r.output("working_index", &res.working_index);
            r.output("radius", &res.radius);
            r.output("root", &res.root);
            res.function
        }
        ConstructPayload::Growth {
            points,
            profile,
            envelope_m,
        } => {
            let pts = points.build()?;
            let g = growth_interpolate(&pts, &profile, settings)?;
            r.check_interpolation("interpolation", &g.certificate);
            let mut s = Series::new(&["r", "lower", "value", "upper"]);
            let tol = settings.tol.sandwich;
            for (p, v) in pts.points().iter().zip(&g.ratios) {
                s.push(vec![p.re, g.lower, *v, g.upper]);
                if !(*v >= g.lower - tol && *v <= g.upper + tol) {
                    r.flag(Status::Uncertified, format!("node ratio {v} at {} leaves the sandwich", p.re));
                }
            }
            r.series.insert("sandwich".into(), s);
            r.output("ratios", &g.ratios);
            r.output("phi0", &g.phi0);
            let vals: Vec<C64> = pts.points().iter().map(|z| g.psi.eval(*z)).collect::<Result<_, _>>()?;
            let w = hardy_interp::interp::TargetSequence::from_values(vals)?;
            let env = rearranged_envelope_for(&pts, &w, &g.psi, envelope_m)?;
            let mut s = Series::new(&["r", "integral", "margin"]);
            for ((p, i), m) in pts.points().iter().zip(&env.integrals).zip(&env.margins) {
                s.push(vec![p.re, *i, *m]);
            }
            r.series.insert("envelope".into(), s);
            if !env.pass {
                r.flag(Status::Uncertified, format!("envelope margin {:e} is negative", env.min_margin));
            }
            r.certificate("envelope", &env);
            g.psi
        }
        ConstructPayload::ExactDecay { points, generator } => {
            let pts = points.build()?;
            let res = exact_decay_interpolate(&pts, &generator, settings)?;
            r.check_interpolation("interpolation", &res.certificate);
            r.output("d", &res.d);
            r.output("psi", &res.psi);
            r.certificate("power", &res.power);
            res.function
        }
        ConstructPayload::Positive { points, values } => {
            let pts = points.build()?;
            let res = positive_interpolate(&pts, &values, settings)?;
            r.check_interpolation("interpolation", &res.certificate);
            r.output("method", &res.method);
            r.certificate("positivity", &res.positivity);
            if !res.positivity.holds {
                r.flag(Status::Uncertified, "positivity certificate does not hold");
            }
            res.function
        }
    };
    boundary_series(&mut r, &f, settings)?;
    r.output("function", &f);
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagnosePayload {
    /// Defaults to twelve exponential nodes of ratio 1/2.
    #[serde(default)]
    points: Option<PointSequenceSpec>,
    #[serde(default)]
    generator: Option<TargetGenerator>,
    #[serde(default)]
    values: Option<Vec<C64>>,
    #[serde(default)]
    function: Option<HardyFunction>,
    #[serde(default)]
    schedule: RadialSchedule,
    #[serde(default)]
    profile: Option<WeightProfile>,
    #[serde(default)]
    radii: Option<Vec<f64>>,
}

fn diagnose(p: DiagnosePayload, settings: &Settings) -> hardy_interp::Result<Report> {
    if p.generator.is_none() && p.values.is_none() && p.function.is_none() && p.profile.is_none() {
        return Err(Error::Contract("diagnose needs a generator, values, a function or a profile".into()));
    }
    let mut r = Report::default();
    if p.generator.is_some() || p.values.is_some() {
        let pts = match &p.points {
            Some(s) => s.build()?,
            None => PointSequence::exponential(0.5, 12)?,
        };
        let spec = TargetSpec {
            values: p.values.clone(),
            generator: p.generator.clone(),
        };
        r.output("decay", &classify_decay(&pts, &spec.build(&pts)?)?);
    }
    if let Some(f) = &p.function {
        let f = function(f, settings)?;
        r.certificate("outer_deficit", &outer_deficit(&f, &settings.tol)?);
        let radial = radial_outer_decay_check(&f, &p.schedule, &settings.tol)?;
        let mut s = Series::new(&["j", "r", "value"]);
        for i in 0..radial.series.j.len() {
            s.push(vec![radial.series.j[i] as f64, radial.series.radii[i], radial.series.values[i]]);
        }
        r.series.insert("radial_decay".into(), s);
        r.certificate("radial_decay", &radial);
        match zero_free_envelope_check(&f, &p.schedule, &settings.tol) {
            Ok(z) => r.certificate("zero_free_envelope", &z),
            Err(Error::Contract(why)) => r.diagnostics.push(format!("zero-free envelope skipped: {why}")),
            Err(e) => return Err(e),
        }
        r.output("boundary_sup", &f.boundary_sup(settings.grid.default_m)?);
    }
    if let Some(h) = &p.profile {
        let radii = p.radii.clone().unwrap_or_else(|| vec![0.9, 0.99, 0.999]);
        let mut s = Series::new(&["r", "lower", "value", "upper"]);
        let mut reports = Vec::new();
        for rho in radii {
            let a = a_h(h, rho, &settings.grid)?;
            s.push(vec![a.r, a.lower, a.value, a.upper]);
            reports.push(a);
        }
        r.series.insert("sandwich".into(), s);
        r.certificate("a_h", &reports);
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelspacePayload {
    points: PointSequenceSpec,
    coefficients: CoeffSpec,
    #[serde(default)]
    profiles: Vec<WeightProfile>,
    #[serde(default)]
    test_functions: Vec<HardyFunction>,
    #[serde(default)]
    fourier_grid: FourierGrid,
    /// Rate for the sufficient-class check.
    #[serde(default)]
    sufficient_c: Option<f64>,
    /// Symbol for the co-analytic Toeplitz action and the range test.
    #[serde(default)]
    phi: Option<HardyFunction>,
}

fn fourier_series(f: &FourierReport) -> Series {
    let mut s = Series::new(&["N", "abs", "fit"]);
    for (n, l) in f.n.iter().zip(&f.log_abs) {
        let x = *n as f64;
        let fit = f.sqrt_fit.map_or(f64::NAN, |q| (q.intercept + q.slope * x.sqrt()).exp());
        s.push(vec![x, l.exp(), fit]);
    }
    s
}

fn modelspace(p: ModelspacePayload, settings: &Settings) -> hardy_interp::Result<Report> {
    let pts = p.points.build()?;
    let coeffs = p.coefficients.build(&pts)?;
    let tests: Vec<HardyFunction> = p.test_functions.iter().map(|f| function(f, settings)).collect::<Result<_, _>>()?;
    let v = membership_tests(&pts, &coeffs, &p.profiles, &tests, &p.fourier_grid, settings)?;
    let mut r = Report::default();
    r.series.insert("fourier".into(), fourier_series(&v.fourier));
    r.output("membership", &v);
    if let Some(c) = p.sufficient_c {
        r.certificate("sufficient_class", &sufficient_class_check(&pts, &coeffs, c)?);
    }
    if let Some(phi) = &p.phi {
        let phi = function(phi, settings)?;
        r.output("toeplitz_image", &toeplitz_apply(&phi, &coeffs, &pts)?);
        let range = range_description_check(&phi, &pts, &coeffs, settings.tol.schur_residual)?;
        if !range.pass {
            r.flag(Status::Uncertified, format!("range round trip residual {:e}", range.roundtrip_residual));
        }
        r.certificate("range", &range);
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RearrangePayload {
    samples: Vec<f64>,
    /// Second function for the rearrangement inequality.
    #[serde(default)]
    pair: Option<Vec<f64>>,
}

fn rearrange(p: RearrangePayload) -> hardy_interp::Result<Report> {
    let f = BoundaryFunction::from_samples(p.samples, false)?;
    let res = rearrange_decreasing(&f)?;
    let mut r = Report::default();
    let m = f.m();
    let mut s = Series::new(&["theta", "value", "rearranged"]);
    for j in 0..m {
        s.push(vec![grid_angle::<f64>(m, j, false), f.samples()[j], res.star_samples[j]]);
    }
    r.series.insert("rearrangement".into(), s);
    r.output("rearrangement", &res);
    if let Some(g) = p.pair {
        let g = BoundaryFunction::from_samples(g, false)?;
        let hl = hl_pairing_check(&f, &g)?;
        if !hl.holds {
            r.flag(Status::NumericFailure, format!("pairing {} exceeds rearranged pairing {}", hl.lhs, hl.rhs));
        }
        r.certificate("pairing", &hl);
    }
    Ok(r)
}
