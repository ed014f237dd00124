//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use hardy_interp::boundary::{hl_pairing_check, poisson_eval, BoundaryFunction};
use hardy_interp::config::{GridConfig, Settings};
use hardy_interp::disk::PointSequence;
use hardy_interp::hardy::{outer_deficit, HardyFunction};
use hardy_interp::interp::{
    exact_decay_interpolate, growth_interpolate, outer_interpolate_bounded_below, pick_matrix, schur_interpolate,
    TargetGenerator, TargetSequence,
};
use hardy_interp::model_space::{
    fourier_coefficients, membership_tests, normalized_kernel, toeplitz_apply, CoeffGenerator, CoefficientSequence,
    FourierGrid, Membership,
};
use hardy_interp::obstruct::{classify_decay, rearranged_envelope_for, radial_outer_decay_check, DecayClass, RadialSchedule};
use hardy_interp::profile::{a_h, WeightProfile, SANDWICH_LOWER, SANDWICH_UPPER};
use hardy_interp::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn targets(v: Vec<C64>) -> TargetSequence {
    TargetSequence::from_values(v).unwrap()
}

fn profiles() -> Vec<WeightProfile> {
    vec![WeightProfile::power(0.5).unwrap(), WeightProfile::log_power(100.0, 3.0).unwrap()]
}

fn poisson_normalization() -> Outcome {
    let grid = GridConfig::default();
    let one = BoundaryFunction::constant(256, 1.0).unwrap();
    let mut worst = 0.0f64;
    for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9), c(0.99, 0.0)] {
        worst = worst.max((poisson_eval(&one, z, &grid).unwrap() - 1.0).abs());
    }
    (worst <= 1e-10, format!("max |P[1](z) - 1| = {worst:.2e}"))
}

fn singular_inner_example() -> Outcome {
    let s = Settings::default();
    let f = HardyFunction::exp_neg_c_over_gap(2.0).unwrap();
    let d = outer_deficit(&f, &s.tol).unwrap();
    let radial = radial_outer_decay_check(&f, &RadialSchedule::default(), &s.tol).unwrap();
    let tail = radial.series.values.iter().rev().take(5).map(|v| (v + 2.0).abs()).fold(0.0, f64::max);
    let ok = (d.boundary_mean_log + 1.0).abs() <= 1e-8
        && d.log_mod_at_0 == -2.0
        && (d.deficit - 1.0).abs() <= 1e-6
        && !radial.pass
        && tail <= 1e-6;
    (
        ok,
        format!(
            "mean log|f| = {:.10}, log|f(0)| = {}, deficit = {:.8}, radial pass = {}, tail |v + 2| = {tail:.1e}",
            d.boundary_mean_log, d.log_mod_at_0, d.deficit, radial.pass
        ),
    )
}

fn ah_sandwich() -> Outcome {
    let grid = GridConfig::default();
    let mut hs = vec![WeightProfile::power(0.3).unwrap(), WeightProfile::power(0.5).unwrap(), WeightProfile::power(0.7).unwrap()];
    hs.push(WeightProfile::log_power(100.0, 3.0).unwrap());
    let mut ok = true;
    let mut min_margin = f64::INFINITY;
    for h in &hs {
        for r in [0.9, 0.99, 0.999] {
            let a = a_h(h, r, &grid).unwrap();
            let ratio = a.ratio.unwrap();
            let margin = (ratio - SANDWICH_LOWER).min(SANDWICH_UPPER - ratio);
            min_margin = min_margin.min(margin);
            ok &= margin >= 0.0;
        }
    }
    (ok, format!("12 cases, smallest normalized margin {min_margin:.4}"))
}

fn hardy_littlewood() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let f: Vec<f64> = (0..256).map(|_| rng.gen_range(0.0..1.0f64).powi(3)).collect();
        let g: Vec<f64> = (0..256).map(|_| rng.gen_range(0.0..5.0)).collect();
        let hl = hl_pairing_check(&BoundaryFunction::from_samples(f, false).unwrap(), &BoundaryFunction::from_samples(g, false).unwrap()).unwrap();
        worst = worst.max(hl.lhs - hl.rhs);
    }
    (worst <= 1e-12, format!("max (int fg - int f*g*) = {worst:.3e} over 1000 pairs"))
}

fn blaschke(zeros: &[C64], z: C64) -> C64 {
    zeros.iter().fold(c(1.0, 0.0), |acc, a| acc * (z - a) / (1.0 - a.conj() * z))
}

fn random_schur_values(rng: &mut ChaCha8Rng, pts: &[C64]) -> Vec<C64> {
    let mut zeros = || -> Vec<C64> {
        let k = rng.gen_range(1..=3);
        (0..k).map(|_| C64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-PI..PI))).collect()
    };
    let (z1, z2) = (zeros(), zeros());
    let t: f64 = rng.gen_range(0.0..1.0);
    let scale = C64::from_polar(rng.gen_range(0.3..1.0), rng.gen_range(-PI..PI));
    pts.iter().map(|z| scale * (blaschke(&z1, *z) * t + blaschke(&z2, *z) * (1.0 - t))).collect()
}

fn schur_pick() -> Outcome {
    let s = Settings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_res, mut worst_sup, mut solved) = (0.0f64, 0.0f64, 0);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let pts = PointSequence::exponential(0.5, n).unwrap();
        let w = random_schur_values(&mut rng, pts.points());
        if let Ok((_, cert)) = schur_interpolate(&pts, &targets(w), &s) {
            worst_res = worst_res.max(cert.max_residual_rel);
            worst_sup = worst_sup.max(cert.sup_bound);
            solved += 1;
        }
    }
    let mut rejected = 0;
    let mut collected = 0;
    while collected < 100 {
        let n = rng.gen_range(2..=8);
        let pts = PointSequence::exponential(0.5, n).unwrap();
        let mut w: Vec<C64> = (0..n).map(|_| C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(-PI..PI))).collect();
        if collected % 2 == 0 {
            // a target outside the closed disk makes a diagonal entry negative
            let k = rng.gen_range(0..n);
            w[k] = C64::from_polar(rng.gen_range(1.05..1.5), rng.gen_range(-PI..PI));
        }
        let w = targets(w);
        if pick_matrix(&pts, &w, &s.tol).unwrap().min_eigenvalue >= -1e-6 {
            continue;
        }
        collected += 1;
        if schur_interpolate(&pts, &w, &s).is_err_and(|e| e.is_infeasible()) {
            rejected += 1;
        }
    }
    let ok = solved == 100 && worst_res <= 1e-8 && worst_sup <= 1.0 + 1e-6 && rejected == 100;
    (
        ok,
        format!("feasible {solved}/100, max residual {worst_res:.2e}, max sup {worst_sup:.9}; infeasible rejected {rejected}/100"),
    )
}

fn bounded_below_end_to_end() -> Outcome {
    let s = Settings::default();
    let pts = PointSequence::exponential(0.5, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_res, mut worst_def, mut pos, mut ok_runs) = (0.0f64, 0.0f64, 0, 0);
    for _ in 0..50 {
        let w: Vec<C64> = (0..12).map(|_| C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI))).collect();
        if let Ok(r) = outer_interpolate_bounded_below(&pts, &targets(w), &s) {
            ok_runs += 1;
            worst_res = worst_res.max(r.certificate.max_residual_rel);
            worst_def = worst_def.max(r.certificate.deficit.map_or(f64::INFINITY, f64::abs));
            pos += r.certificate.positivity.as_ref().is_some_and(|p| p.holds) as usize;
        }
    }
    let ok = ok_runs == 50 && worst_res <= 1e-6 && worst_def <= 1e-6 && pos == 50;
    (
        ok,
        format!("{ok_runs}/50 built, max residual {worst_res:.2e}, max |deficit| {worst_def:.2e}, positivity {pos}/50"),
    )
}

fn obstruction_classes() -> Outcome {
    let pts = PointSequence::exponential(0.5, 12).unwrap();
    let gen = |g: TargetGenerator| TargetSequence::from_generator(&pts, g).unwrap();
    let a = classify_decay(&pts, &gen(TargetGenerator::ExpNegCOverGap { c: 1.0 })).unwrap();
    let b = classify_decay(&pts, &gen(TargetGenerator::ExpNegCOverGapSq { c: 1.0 })).unwrap();
    let dev = a.s_values.iter().map(|s| (s + 1.0).abs()).fold(0.0, f64::max);
    let ok = a.classification == DecayClass::InnerForced && dev <= 1e-12 && b.classification == DecayClass::BlaschkeForced;
    (ok, format!("{:?} (max |s + 1| = {dev:.1e}), {:?}", a.classification, b.classification))
}

fn growth_interpolants(pts: &PointSequence<f64>) -> Vec<(String, hardy_interp::interp::GrowthResult)> {
    let s = Settings::default();
    profiles().into_iter().map(|h| (h.name(), growth_interpolate(pts, &h, &s).unwrap())).collect()
}

fn growth_interpolant() -> Outcome {
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, g) in growth_interpolants(&pts) {
        let inside = g.ratios.iter().all(|r| *r >= SANDWICH_LOWER - 1e-8 && *r <= SANDWICH_UPPER + 1e-8);
        ok &= inside && g.certificate.max_residual_rel <= 1e-6;
        let lo = g.ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = g.ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        notes.push(format!("{name}: ratios [{lo:.4}, {hi:.4}], residual {:.1e}", g.certificate.max_residual_rel));
    }
    (ok, notes.join("; "))
}

fn bounded_outer_example() -> Outcome {
    let s = Settings::default();
    let f = HardyFunction::exp_neg_c_power(1.0, 0.5).unwrap();
    let sup = f.boundary_sup(1 << 16).unwrap();
    let bound = (-(2f64.powf(-0.5)) * (PI / 4.0).cos()).exp();
    let d = outer_deficit(&f, &s.tol).unwrap();
    let ok = sup <= bound + 1e-8 && d.deficit.abs() <= 1e-6;
    (ok, format!("sup {sup:.12} vs bound {bound:.12}, deficit {:.2e}", d.deficit))
}

fn exact_decay() -> Outcome {
    let s = Settings::default();
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for h in profiles() {
        let name = h.name();
        let r = exact_decay_interpolate(&pts, &TargetGenerator::ProfileDecay { h }, &s).unwrap();
        let inside = r.d.iter().all(|d| *d >= SANDWICH_LOWER - 1e-8 && *d <= SANDWICH_UPPER + 1e-8);
        let pos = r.psi.positivity.holds;
        ok &= inside && r.certificate.max_residual_rel <= 1e-6 && pos;
        notes.push(format!("{name}: d in sandwich {inside}, residual {:.1e}, positivity {pos}", r.certificate.max_residual_rel));
    }
    (ok, notes.join("; "))
}

fn envelope() -> Outcome {
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let mut worst = f64::INFINITY;
    for (_, g) in growth_interpolants(&pts) {
        let vals: Vec<C64> = pts.points().iter().map(|z| g.psi.eval(*z).unwrap()).collect();
        let r = rearranged_envelope_for(&pts, &targets(vals), &g.psi, 1 << 16).unwrap();
        worst = worst.min(r.min_margin);
    }
    (worst >= -1e-8, format!("smallest margin {worst:.3e}"))
}

fn model_space() -> Outcome {
    let start = Instant::now();
    // Toeplitz action on the kernels of a five-point finite Blaschke model space
    let pts = PointSequence::new(vec![c(0.5, 0.0), c(0.1, 0.6), c(-0.7, 0.2), c(0.0, -0.8), c(0.85, 0.3)]).unwrap();
    let w: Vec<C64> = pts.points().iter().map(|z| 0.4 + 0.3 * z * z).collect();
    let (phi, _) = schur_interpolate(&pts, &targets(w), &Settings::default()).unwrap();
    let a = CoefficientSequence::from_values(vec![c(1.0, 0.0), c(-0.5, 0.2), c(0.3, 0.3), c(0.0, -1.0), c(0.7, 0.1)]).unwrap();
    let b = toeplitz_apply(&phi, &a, &pts).unwrap();
    let m = 8192;
    let phi_b = phi.boundary_values(m).unwrap();
    let theta: Vec<f64> = (0..m).map(|j| 2.0 * PI * (j as f64 + 0.5) / m as f64 - PI).collect();
    let g: Vec<C64> = theta
        .iter()
        .zip(&phi_b)
        .map(|(t, p)| {
            let z = C64::from_polar(1.0, *t);
            p.conj() * pts.points().iter().zip(&a.a).map(|(l, a)| a * normalized_kernel(*l, z)).sum::<C64>()
        })
        .collect();
    let mut toeplitz_err = 0.0f64;
    for k in 0..256 {
        let projected = g.iter().zip(&theta).map(|(v, t)| v * C64::from_polar(1.0, -(k as f64) * t)).sum::<C64>() / m as f64;
        let direct: C64 = pts
            .points()
            .iter()
            .zip(&b.a)
            .map(|(l, b)| b * (1.0 - l.norm_sqr()).sqrt() * l.conj().powi(k))
            .sum();
        toeplitz_err = toeplitz_err.max((projected - direct).norm());
    }

    let nodes = PointSequence::exponential(0.5, 10).unwrap();
    let coeffs = CoefficientSequence::from_generator(&nodes, CoeffGenerator::ExpNegCOverGap { c: 3.0 }).unwrap();
    let grid = FourierGrid::default();
    let n = grid.indices().unwrap();
    let logs = fourier_coefficients(&nodes, &coeffs, &n).unwrap();
    let below = n.iter().zip(&logs).all(|(n, l)| *l <= -(*n as f64).sqrt());
    let v = membership_tests(&nodes, &coeffs, &profiles(), &[], &grid, &Settings::default()).unwrap();
    let fit = v.fourier.sqrt_fit.unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = toeplitz_err <= 1e-8 && below && fit.slope < 0.0 && fit.r_squared >= 0.9 && secs <= 60.0 && v.verdict == Membership::Member;
    (
        ok,
        format!(
            "toeplitz err {toeplitz_err:.1e}; |f^(N)| <= exp(-sqrt N) {below}; slope {:.4}, R^2 {:.4}; verdict {:?}; {secs:.1}s",
            fit.slope, fit.r_squared, v.verdict
        ),
    )
}

fn run_suite(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&root).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let stem = f.file_stem().unwrap().to_string_lossy().to_string();
        let target = dir.join(&stem);
        Command::new(env!("CARGO_BIN_EXE_hardy-interp"))
            .arg("--input")
            .arg(&f)
            .arg("--out")
            .arg(&target)
            .output()
            .unwrap();
        let mut names: Vec<PathBuf> = std::fs::read_dir(&target).map_or(Vec::new(), |d| d.map(|e| e.unwrap().path()).collect());
        names.sort();
        for p in names {
            out.push((format!("{stem}/{}", p.file_name().unwrap().to_string_lossy()), std::fs::read(&p).unwrap()));
        }
    }
    out
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run_suite(a.path());
    let second = run_suite(b.path());
    let same = first == second && !first.is_empty();
    (same, format!("{} artifacts compared byte for byte", first.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("Poisson normalization", poisson_normalization),
        ("singular inner example", singular_inner_example),
        ("A_h sandwich", ah_sandwich),
        ("rearrangement inequality", hardy_littlewood),
        ("Schur/Pick solver", schur_pick),
        ("bounded-below outer interpolation", bounded_below_end_to_end),
        ("obstruction classification", obstruction_classes),
        ("growth interpolant", growth_interpolant),
        ("bounded outer example", bounded_outer_example),
        ("exact-decay construction", exact_decay),
        ("envelope margins", envelope),
        ("model space", model_space),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = check();
        failed += !ok as usize;
        println!("AC{:<2} {} {name}: {detail} ({:.1}s)", i + 1, if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
