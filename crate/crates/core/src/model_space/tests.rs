use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::config::Settings;
use crate::interp::{schur_interpolate, TargetSequence};
use crate::profile::WeightProfile;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn bounded_phi(points: &PointSequence<f64>) -> HardyFunction {
    let w: Vec<C64> = points.points().iter().map(|z| 0.4 + 0.3 * z * z).collect();
    schur_interpolate(points, &TargetSequence::from_values(w).unwrap(), &Settings::default())
        .unwrap()
        .0
}

/// Taylor coefficients `0..k` of `P+(conj(phi) f)` from boundary samples.
fn projected_coefficients(phi: &HardyFunction, points: &PointSequence<f64>, a: &[C64], m: usize, k: usize) -> Vec<C64> {
    let phi_b = phi.boundary_values(m).unwrap();
    let theta: Vec<f64> = (0..m).map(|j| 2.0 * PI * (j as f64 + 0.5) / m as f64 - PI).collect();
    let g: Vec<C64> = theta
        .iter()
        .zip(&phi_b)
        .map(|(t, p)| {
            let z = C64::from_polar(1.0, *t);
            let f: C64 = points.points().iter().zip(a).map(|(l, a)| a * normalized_kernel(*l, z)).sum();
            p.conj() * f
        })
        .collect();
    (0..k)
        .map(|n| g.iter().zip(&theta).map(|(v, t)| v * C64::from_polar(1.0, -(n as f64) * t)).sum::<C64>() / m as f64)
        .collect()
}

fn kernel_coefficients(points: &PointSequence<f64>, b: &[C64], k: usize) -> Vec<C64> {
    (0..k)
        .map(|n| {
            points
                .points()
                .iter()
                .zip(b)
                .map(|(l, b)| b * (1.0 - l.norm_sqr()).sqrt() * l.conj().powi(n as i32))
                .sum()
        })
        .collect()
}

#[test]
fn kernel_examples() {
    let l = c(0.3, -0.6);
    assert!((cauchy_kernel(l, c(0.0, 0.0)) - 1.0).norm() < 1e-15);
    assert!((cauchy_kernel(l, l) - 1.0 / (1.0 - l.norm_sqr())).norm() < 1e-12);
    // unit norm from boundary samples
    let m = 4096;
    let mean: f64 = (0..m)
        .map(|j| normalized_kernel(l, C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).norm_sqr())
        .sum::<f64>()
        / m as f64;
    assert!((mean - 1.0).abs() < 1e-12);
}

#[test]
fn toeplitz_matches_grid_projection() {
    let pts = PointSequence::new(vec![c(0.5, 0.0), c(0.1, 0.6), c(-0.7, 0.2), c(0.0, -0.8), c(0.85, 0.3)]).unwrap();
    let phi = bounded_phi(&pts);
    let a = CoefficientSequence::from_values(vec![c(1.0, 0.0), c(-0.5, 0.2), c(0.3, 0.3), c(0.0, -1.0), c(0.7, 0.1)]).unwrap();
    let b = toeplitz_apply(&phi, &a, &pts).unwrap();
    let k = 256;
    let oracle = projected_coefficients(&phi, &pts, &a.a, 8192, k);
    let got = kernel_coefficients(&pts, &b.a, k);
    let err = oracle.iter().zip(&got).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn range_description_examples() {
    let pts = PointSequence::exponential(0.5, 8).unwrap();
    let phi = HardyFunction::one_minus_z();
    let b = CoefficientSequence::from_generator(&pts, CoeffGenerator::ExpNegCOverGap { c: 1.0 }).unwrap();
    let r = range_description_check(&phi, &pts, &b, 1e-8).unwrap();
    assert!(r.pass, "{}", r.roundtrip_residual);
    for ((g, b), p) in r.preimage.a.iter().zip(&b.a).zip(pts.points()) {
        assert!((g * (1.0 - p.conj()) - b).norm() <= 1e-12 * b.norm());
    }

    let zeros = crate::hardy::InnerSpec {
        zeros: vec![pts.points()[2]],
        ..Default::default()
    };
    let blaschke = HardyFunction::inner(zeros).unwrap();
    assert!(range_description_check(&blaschke, &pts, &b, 1e-8).is_err());
}

#[test]
fn fourier_coefficients_match_direct_sum() {
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let a = CoefficientSequence::from_generator(&pts, CoeffGenerator::ExpNegCOverGap { c: 3.0 }).unwrap();
    let n: Vec<u64> = vec![100, 400, 1000, 3000, 10_000];
    let got = fourier_coefficients(&pts, &a, &n).unwrap();
    for (nn, l) in n.iter().zip(&got) {
        let direct: f64 = pts
            .points()
            .iter()
            .map(|p| (-3.0 / (1.0 - p.re)).exp() * (1.0 - p.re * p.re).sqrt() * p.re.powf(*nn as f64))
            .sum();
        assert!((l.exp() - direct).abs() <= 1e-10 * direct, "N = {nn}");
    }
}

#[test]
fn membership_examples() {
    let s = Settings::default();
    let grid = FourierGrid::default();
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let profiles = [WeightProfile::power(0.5).unwrap(), WeightProfile::log_power(100.0, 3.0).unwrap()];
    let phis = [HardyFunction::one_minus_z(), HardyFunction::exp_neg_c_power(1.0, 0.5).unwrap()];

    let a = CoefficientSequence::from_generator(&pts, CoeffGenerator::ExpNegCOverGap { c: 3.0 }).unwrap();
    let v = membership_tests(&pts, &a, &profiles, &phis, &grid, &s).unwrap();
    assert_eq!(v.verdict, Membership::Member, "{:?}", v.diagnostics);
    assert!(v.fourier.below_unit_envelope);
    let fit = v.fourier.sqrt_fit.unwrap();
    assert!(fit.slope < 0.0 && fit.r_squared >= 0.9, "{fit:?}");
    assert!(v.fitted_c.is_some());
    assert!(v.fourier.to_csv().starts_with("N,abs,fit\n"));

    let finite = CoefficientSequence::finite_support(vec![c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)]).unwrap();
    let three = PointSequence::exponential(0.5, 3).unwrap();
    let v = membership_tests(&three, &finite, &profiles, &phis, &grid, &s).unwrap();
    assert_eq!(v.verdict, Membership::Member);
    assert!(v.per_test.iter().all(|t| t.method == Method::Exact));

    let inv_sq = CoefficientSequence::from_generator(&pts, CoeffGenerator::PowerDecay { p: 2.0 }).unwrap();
    let v = membership_tests(&pts, &inv_sq, &profiles[..1], &[], &grid, &s).unwrap();
    assert_eq!(v.verdict, Membership::NonMember);
    let t = &v.per_test[0];
    assert_eq!((t.kind, t.status, t.method), (TestKind::WeightedByProfile, TestStatus::Fail, Method::Numeric));

    // phi = 1 is too weak a test function to see the divergence
    let one = HardyFunction::constant(c(1.0, 0.0)).unwrap();
    let v = membership_tests(&pts, &inv_sq, &profiles[..1], &[one], &grid, &s).unwrap();
    assert_eq!(v.verdict, Membership::Inconclusive);
    assert!(!v.diagnostics.is_empty());
}

#[test]
fn sufficient_class_examples() {
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let a = CoefficientSequence::from_generator(&pts, CoeffGenerator::ExpNegCOverGap { c: 3.0 }).unwrap();
    assert_eq!(sufficient_class_check(&pts, &a, 5.0).unwrap().status, TestStatus::Pass);
    assert_eq!(sufficient_class_check(&pts, &a, 6.0).unwrap().status, TestStatus::Fail);
    let inv = CoefficientSequence::from_generator(&pts, CoeffGenerator::PowerDecay { p: 1.0 }).unwrap();
    assert_eq!(sufficient_class_check(&pts, &inv, 1.0).unwrap().status, TestStatus::Fail);
    let raw = CoefficientSequence::from_values(inv.a.clone()).unwrap();
    let r = sufficient_class_check(&pts, &raw, 1.0).unwrap();
    assert_eq!((r.status, r.method), (TestStatus::Fail, Method::Numeric));
    assert!(sufficient_class_check(&pts, &a, 0.0).is_err());
}

#[test]
fn density_counts_nonzero_targets() {
    let pts = PointSequence::exponential(0.1, 8).unwrap();
    let b: Vec<C64> = (0..8).map(|i| if i % 3 == 1 { c(0.0, 0.0) } else { c(0.05, 0.01 * i as f64) }).collect();
    let (phi, _) = schur_interpolate(&pts, &TargetSequence::from_values(b.clone()).unwrap(), &Settings::default()).unwrap();
    let d = density_demo(&pts, &phi, &CoefficientSequence::from_values(b).unwrap()).unwrap();
    assert_eq!(d.nonzero, 5);
    for (i, s) in d.partial_sums.iter().enumerate() {
        assert!((s - (i + 1) as f64).abs() < 1e-8, "{s}");
    }
}

#[test]
fn coefficient_spec_examples() {
    let pts = PointSequence::exponential(0.5, 4).unwrap();
    let g = CoeffGenerator::PowerDecay { p: 1.0 };
    let spec = CoeffSpec {
        values: Some(vec![c(1.0, 0.0), c(0.5, 0.0), c(1.0 / 3.0, 0.0), c(0.25, 0.0)]),
        generator: Some(g.clone()),
    };
    assert!(spec.build(&pts).is_ok());
    let bad = CoeffSpec {
        values: Some(vec![c(1.0, 0.0); 4]),
        generator: Some(g),
    };
    assert!(bad.build(&pts).is_err());
    assert!(CoeffSpec { values: None, generator: None }.build(&pts).is_err());
    assert!(CoeffSpec {
        values: Some(vec![c(1.0, 0.0); 3]),
        generator: None
    }
    .build(&pts)
    .is_err());
}

fn generator() -> impl Strategy<Value = CoeffGenerator> {
    prop_oneof![
        (0.5f64..5.0).prop_map(|c| CoeffGenerator::ExpNegCOverGap { c }),
        (0.5f64..3.0).prop_map(|p| CoeffGenerator::PowerDecay { p }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn verdict_invariant_under_scaling(g in generator(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!(re.hypot(im) > 1e-3);
        let s = Settings::default();
        let pts = PointSequence::exponential(0.5, 10).unwrap();
        let profiles = [WeightProfile::power(0.5).unwrap()];
        let a = CoefficientSequence::from_generator(&pts, g).unwrap();
        let v0 = membership_tests(&pts, &a, &profiles, &[], &FourierGrid::default(), &s).unwrap();
        let v1 = membership_tests(&pts, &a.scaled(c(re, im)), &profiles, &[], &FourierGrid::default(), &s).unwrap();
        prop_assert_eq!(v0.verdict, v1.verdict);
    }

    #[test]
    fn verdict_invariant_under_permutation(
        logs in proptest::collection::vec(-40.0f64..0.0, 8),
        phases in proptest::collection::vec(-PI..PI, 8),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let s = Settings::default();
        let pts = PointSequence::exponential(0.5, 8).unwrap();
        let a: Vec<C64> = logs.iter().zip(&phases).map(|(l, p)| C64::from_polar(l.exp(), *p)).collect();
        let mut perm: Vec<usize> = (0..8).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let pts_p = PointSequence::new(perm.iter().map(|&i| pts.points()[i]).collect()).unwrap();
        let a_p: Vec<C64> = perm.iter().map(|&i| a[i]).collect();
        let profiles = [WeightProfile::power(0.5).unwrap()];
        let grid = FourierGrid::default();
        let v0 = membership_tests(&pts, &CoefficientSequence::from_values(a).unwrap(), &profiles, &[], &grid, &s).unwrap();
        let v1 = membership_tests(&pts_p, &CoefficientSequence::from_values(a_p).unwrap(), &profiles, &[], &grid, &s).unwrap();
        prop_assert_eq!(v0.verdict, v1.verdict);
        for (x, y) in v0.fourier.log_abs.iter().zip(&v1.fourier.log_abs) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
