use serde::{Deserialize, Serialize};

use super::{check_len, log_value, CoeffGenerator, CoefficientSequence};
use crate::config::Settings;
use crate::disk::PointSequence;
use crate::error::{Error, Result};
use crate::hardy::{outer_deficit, HardyFunction};
use crate::profile::WeightProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// How a status was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Finite sum, nothing asymptotic to decide.
    Exact,
    /// Rate comparison between closed-form generators.
    Symbolic,
    /// Heuristic on the computed terms.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    /// `sum |a_n|^2 / |phi(lambda_n)| < inf` for a bounded outer `phi`.
    WeightedByOuter,
    /// `sum |a_n|^2 exp((1/g_n) int_0^g_n h) < inf`.
    WeightedByProfile,
    /// `|f^(N)| <= C exp(-c sqrt N)`.
    FourierDecay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: TestKind,
    /// Name of the test function or profile.
    pub subject: String,
    pub status: TestStatus,
    pub method: Method,
    /// Logs of the partial sums in order of decreasing gap.
    pub log_partial_sums: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive,
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl LineFit {
    pub fn fit(x: &[f64], y: &[f64]) -> Option<Self> {
        let pairs: Vec<(f64, f64)> = x.iter().zip(y).filter(|(_, y)| y.is_finite()).map(|(a, b)| (*a, *b)).collect();
        if pairs.len() < 3 {
            return None;
        }
        let n = pairs.len() as f64;
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pairs.iter().map(|p| (p.1 - my).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let slope = sxy / sxx;
        let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        Some(Self {
            slope,
            intercept: my - slope * mx,
            r_squared,
        })
    }
}

/// Geometric grid of Fourier indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierGrid {
    pub n_min: u64,
    pub n_max: u64,
    pub count: usize,
}

impl Default for FourierGrid {
    fn default() -> Self {
        Self {
            n_min: 100,
            n_max: 10_000,
            count: 25,
        }
    }
}

impl FourierGrid {
    pub fn indices(&self) -> Result<Vec<u64>> {
        if self.n_min == 0 || self.n_max < self.n_min || self.count < 2 {
            return Err(Error::Domain(format!("bad Fourier grid {self:?}")));
        }
        let (a, b) = ((self.n_min as f64).ln(), (self.n_max as f64).ln());
        let mut out: Vec<u64> = (0..self.count)
            .map(|i| (a + (b - a) * i as f64 / (self.count - 1) as f64).exp().round() as u64)
            .collect();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierReport {
    pub n: Vec<u64>,
    pub log_abs: Vec<f64>,
    /// `log |f^(N)|` against `sqrt N`.
    pub sqrt_fit: Option<LineFit>,
    /// `log |f^(N)|` against `N`, which catches geometric decay.
    pub linear_fit: Option<LineFit>,
    /// Whether `|f^(N)| <= exp(-sqrt N)` on the whole grid.
    pub below_unit_envelope: bool,
}

impl FourierReport {
    /// Rows `N,abs,fit` with the fitted `exp(intercept + slope sqrt N)`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,abs,fit\n");
        for (n, l) in self.n.iter().zip(&self.log_abs) {
            let fit = self
                .sqrt_fit
                .map(|f| (f.intercept + f.slope * (*n as f64).sqrt()).exp())
                .unwrap_or(f64::NAN);
            s.push_str(&format!("{n},{:e},{:e}\n", l.exp(), fit));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub per_test: Vec<TestResult>,
    pub fourier: FourierReport,
    /// `-slope` of the `sqrt N` fit when it is negative with a good fit.
    pub fitted_c: Option<f64>,
    pub verdict: Membership,
    pub diagnostics: Vec<String>,
}

pub(super) fn log_sum_exp(it: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = it.into_iter().collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Neumaier-compensated sum.
fn compensated_sum(it: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in it {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// `log |f^(N)|` for `f = sum a_n kappa_n`, where
/// `f^(N) = sum a_n sqrt(1 - |lambda_n|^2) conj(lambda_n)^N`.
pub fn fourier_coefficients(points: &PointSequence<f64>, coeffs: &CoefficientSequence, n: &[u64]) -> Result<Vec<f64>> {
    check_len(points, coeffs.len())?;
    Ok(n
        .iter()
        .map(|&nn| {
            let terms: Vec<(f64, f64)> = points
                .points()
                .iter()
                .zip(&coeffs.a)
                .zip(&coeffs.log_abs)
                .filter_map(|((p, a), la)| {
                    let lp = if nn == 0 { 0.0 } else { nn as f64 * p.norm().ln() };
                    let l = la + 0.5 * (1.0 - p.norm_sqr()).ln() + lp;
                    l.is_finite().then(|| (l, a.arg() - nn as f64 * p.arg()))
                })
                .collect();
            let m = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
            if !m.is_finite() {
                return f64::NEG_INFINITY;
            }
            let re = compensated_sum(terms.iter().map(|(l, ph)| (l - m).exp() * ph.cos()));
            let im = compensated_sum(terms.iter().map(|(l, ph)| (l - m).exp() * ph.sin()));
            m + re.hypot(im).ln()
        })
        .collect())
}

fn fourier_report(points: &PointSequence<f64>, coeffs: &CoefficientSequence, grid: &FourierGrid) -> Result<FourierReport> {
    let n = grid.indices()?;
    let log_abs = fourier_coefficients(points, coeffs, &n)?;
    let sq: Vec<f64> = n.iter().map(|v| (*v as f64).sqrt()).collect();
    let lin: Vec<f64> = n.iter().map(|v| *v as f64).collect();
    Ok(FourierReport {
        below_unit_envelope: log_abs.iter().zip(&sq).all(|(l, s)| *l <= -s),
        sqrt_fit: LineFit::fit(&sq, &log_abs),
        linear_fit: LineFit::fit(&lin, &log_abs),
        n,
        log_abs,
    })
}

/// Order of decreasing gap, so trends do not depend on how points are listed.
fn gap_order(points: &PointSequence<f64>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let pts = points.points();
    idx.sort_by(|&i, &j| pts[i].norm().total_cmp(&pts[j].norm()).then(i.cmp(&j)));
    idx
}

fn log_partial_sums(terms: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(terms.len());
    let mut acc = f64::NEG_INFINITY;
    for &t in terms {
        acc = log_sum_exp([acc, t]);
        out.push(acc);
    }
    out
}

/// Ratio heuristic on the last three steps of the log terms: sustained
/// growth diverges, sustained ratio below 0.9 is geometric convergence.
fn trend(terms: &[f64]) -> TestStatus {
    let finite: Vec<f64> = terms.iter().copied().filter(|t| t.is_finite()).collect();
    if finite.len() < 4 {
        return TestStatus::Inconclusive;
    }
    let steps: Vec<f64> = finite.windows(2).rev().take(3).map(|w| w[1] - w[0]).collect();
    if steps.iter().all(|s| *s >= 0.0) {
        TestStatus::Fail
    } else if steps.iter().all(|s| *s <= 0.9f64.ln()) {
        TestStatus::Pass
    } else {
        TestStatus::Inconclusive
    }
}

fn series_test(kind: TestKind, subject: String, coeffs: &CoefficientSequence, terms: Vec<f64>, symbolic: Option<TestStatus>) -> TestResult {
    let log_partial_sums = log_partial_sums(&terms);
    let (status, method) = match (&coeffs.generator, symbolic) {
        (Some(CoeffGenerator::FiniteSupport), _) => {
            let s = if log_partial_sums.last().is_none_or(|l| *l < f64::INFINITY) {
                TestStatus::Pass
            } else {
                TestStatus::Fail
            };
            (s, Method::Exact)
        }
        (_, Some(s)) => (s, Method::Symbolic),
        _ => (trend(&terms), Method::Numeric),
    };
    TestResult {
        kind,
        subject,
        status,
        method,
        log_partial_sums,
        note: None,
    }
}

/// Runs the weighted-sum tests for each bounded outer test function and
/// each profile, plus the Fourier decay test, and combines them.
pub fn membership_tests(
    points: &PointSequence<f64>,
    coeffs: &CoefficientSequence,
    profiles: &[WeightProfile],
    test_functions: &[HardyFunction],
    grid: &FourierGrid,
    settings: &Settings,
) -> Result<MembershipVerdict> {
    check_len(points, coeffs.len())?;
    let order = gap_order(points);
    let pts = points.points();
    let mut per_test = Vec::new();
    let mut diagnostics = Vec::new();

    for (i, phi) in test_functions.iter().enumerate() {
        let subject = format!("test_function[{i}]");
        let outer = outer_deficit(phi, &settings.tol)?.status.is_outer();
        if !(outer && phi.expr.is_bounded()) {
            diagnostics.push(format!("{subject} is not certified bounded outer; its test is inconclusive"));
        }
        let mut terms = Vec::with_capacity(order.len());
        for &k in &order {
            terms.push(2.0 * coeffs.log_abs[k] - log_value(phi, pts[k])?.re);
        }
        // a bounded outer phi decays no faster than exp(-o(1/gap)) radially,
        // so exp(-c/gap) coefficients always win
        let symbolic = match coeffs.generator {
            Some(CoeffGenerator::ExpNegCOverGap { .. }) if outer && phi.expr.is_bounded() => Some(TestStatus::Pass),
            _ => None,
        };
        let mut t = series_test(TestKind::WeightedByOuter, subject, coeffs, terms, symbolic);
        if !(outer && phi.expr.is_bounded()) {
            t.status = TestStatus::Inconclusive;
            t.note = Some("not certified bounded outer".into());
        }
        per_test.push(t);
    }

    for h in profiles {
        h.validate()?;
        let mut terms = Vec::with_capacity(order.len());
        for &k in &order {
            let g = 1.0 - pts[k].norm();
            terms.push(2.0 * coeffs.log_abs[k] + h.integral(g)? / g);
        }
        // (1/g) int_0^g h = o(1/g) for integrable h
        let symbolic = match coeffs.generator {
            Some(CoeffGenerator::ExpNegCOverGap { .. }) => Some(TestStatus::Pass),
            _ => None,
        };
        per_test.push(series_test(TestKind::WeightedByProfile, h.name(), coeffs, terms, symbolic));
    }

    let fourier = fourier_report(points, coeffs, grid)?;
    let r2 = settings.tol.r_squared;
    let good = |f: &Option<LineFit>| f.is_some_and(|f| f.slope < 0.0 && f.r_squared >= r2);
    let fitted_c = fourier.sqrt_fit.filter(|f| f.slope < 0.0 && f.r_squared >= r2).map(|f| -f.slope);
    let (status, method) = match coeffs.generator {
        // f^(N) ~ exp(-2 sqrt(c N)) along exponential nodes
        Some(CoeffGenerator::ExpNegCOverGap { .. }) => (TestStatus::Pass, Method::Symbolic),
        // polynomial decay of f^(N)
        Some(CoeffGenerator::PowerDecay { .. }) => (TestStatus::Fail, Method::Symbolic),
        Some(CoeffGenerator::FiniteSupport) => (TestStatus::Pass, Method::Exact),
        None if good(&fourier.sqrt_fit) || good(&fourier.linear_fit) => (TestStatus::Pass, Method::Numeric),
        None => (TestStatus::Inconclusive, Method::Numeric),
    };
    per_test.push(TestResult {
        kind: TestKind::FourierDecay,
        subject: "fourier".into(),
        status,
        method,
        log_partial_sums: Vec::new(),
        note: fitted_c.map(|c| format!("fitted c = {c:.6}")),
    });

    let verdict = combine(&per_test, &mut diagnostics);
    Ok(MembershipVerdict {
        per_test,
        fourier,
        fitted_c,
        verdict,
        diagnostics,
    })
}

fn combine(tests: &[TestResult], diagnostics: &mut Vec<String>) -> Membership {
    let kinds = [TestKind::WeightedByOuter, TestKind::WeightedByProfile, TestKind::FourierDecay];
    let mut statuses = Vec::new();
    for kind in kinds {
        let of: Vec<TestStatus> = tests.iter().filter(|t| t.kind == kind).map(|t| t.status).collect();
        if of.is_empty() {
            continue;
        }
        // one failing family member fails the whole test
        statuses.push(if of.contains(&TestStatus::Fail) {
            TestStatus::Fail
        } else if of.contains(&TestStatus::Inconclusive) {
            TestStatus::Inconclusive
        } else {
            TestStatus::Pass
        });
    }
    let pass = statuses.contains(&TestStatus::Pass);
    let fail = statuses.contains(&TestStatus::Fail);
    if pass && fail {
        diagnostics.push("tests disagree; the families supplied may be too small".into());
        return Membership::Inconclusive;
    }
    if statuses.contains(&TestStatus::Inconclusive) {
        Membership::Inconclusive
    } else if fail {
        Membership::NonMember
    } else {
        Membership::Member
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SufficientReport {
    pub status: TestStatus,
    pub method: Method,
    /// Logs of the partial sums of `|a_n|^2 exp(c / gap_n)`.
    pub log_partial_sums: Vec<f64>,
}

/// `sum |a_n|^2 exp(c / (1 - |lambda_n|)) < inf`, which implies membership.
pub fn sufficient_class_check(points: &PointSequence<f64>, coeffs: &CoefficientSequence, c: f64) -> Result<SufficientReport> {
    check_len(points, coeffs.len())?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("rate c must be positive, got {c}")));
    }
    let pts = points.points();
    let terms: Vec<f64> = gap_order(points)
        .into_iter()
        .map(|k| 2.0 * coeffs.log_abs[k] + c / (1.0 - pts[k].norm()))
        .collect();
    let log_partial_sums = log_partial_sums(&terms);
    let (status, method) = match coeffs.generator {
        Some(CoeffGenerator::ExpNegCOverGap { c: ca }) => {
            (if 2.0 * ca > c { TestStatus::Pass } else { TestStatus::Fail }, Method::Symbolic)
        }
        Some(CoeffGenerator::PowerDecay { .. }) => (TestStatus::Fail, Method::Symbolic),
        Some(CoeffGenerator::FiniteSupport) => (TestStatus::Pass, Method::Exact),
        None => (trend(&terms), Method::Numeric),
    };
    Ok(SufficientReport {
        status,
        method,
        log_partial_sums,
    })
}
