use hardy_interp::boundary::{rearrange_decreasing, BoundaryFunction};
use hardy_interp::config::Settings;
use hardy_interp::disk::{separation_delta, PointSequence};
use hardy_interp::hardy::HardyFunction;
use hardy_interp::interp::{exact_decay_interpolate, outer_interpolate_bounded_below, TargetGenerator, TargetSequence};
use hardy_interp::model_space::{range_description_check, CoeffGenerator, CoefficientSequence};
use hardy_interp::obstruct::{classify_decay, DecayClass};
use hardy_interp::profile::WeightProfile;
use hardy_interp::{Points, C64};

#[test]
fn interpolant_survives_json_round_trip() {
    let s = Settings::default();
    let pts: Points = PointSequence::exponential(0.5, 8).unwrap();
    let w: Vec<C64> = (0..8).map(|n| C64::from_polar(0.6 + 0.15 * n as f64, 0.7 * n as f64)).collect();
    let r = outer_interpolate_bounded_below(&pts, &TargetSequence::from_values(w.clone()).unwrap(), &s).unwrap();
    let json = serde_json::to_string(&r.function).unwrap();
    let back: HardyFunction = serde_json::from_str(&json).unwrap();
    for (z, w) in pts.points().iter().zip(&w) {
        let v = back.eval(*z).unwrap();
        assert!((v - w).norm() <= 1e-6 * w.norm(), "{v} vs {w}");
    }
}

#[test]
fn exact_decay_targets_are_classified_outer_possible() {
    let s = Settings::default();
    let pts = PointSequence::exponential(0.5, 10).unwrap();
    let generator = TargetGenerator::ProfileDecay {
        h: WeightProfile::power(0.5).unwrap(),
    };
    let w = TargetSequence::from_generator(&pts, generator.clone()).unwrap();
    assert_eq!(classify_decay(&pts, &w).unwrap().classification, DecayClass::OuterPossible);
    let r = exact_decay_interpolate(&pts, &generator, &s).unwrap();
    assert!(r.certificate.outer_status.is_some_and(|o| o.is_outer()));
    // the interpolant is zero-free, so every exp(-c/gap) sequence lies in
    // the range of its co-analytic Toeplitz operator on the kernels
    let b = CoefficientSequence::from_generator(&pts, CoeffGenerator::ExpNegCOverGap { c: 2.0 }).unwrap();
    assert!(range_description_check(&r.function, &pts, &b, 1e-8).unwrap().pass);
}

#[test]
fn geometry_agrees_across_scalars() {
    let p64 = PointSequence::<f64>::exponential(0.5, 6).unwrap();
    let p32 = PointSequence::<f32>::exponential(0.5, 6).unwrap();
    let (d64, d32) = (separation_delta(&p64).delta, separation_delta(&p32).delta);
    assert!((d64 - d32 as f64).abs() <= 1e-4 * d64, "{d64} vs {d32}");

    let samples: Vec<f64> = (0..64).map(|j| ((j * 29) % 64) as f64 / 8.0).collect();
    let r64 = rearrange_decreasing(&BoundaryFunction::from_samples(samples.clone(), false).unwrap()).unwrap();
    let s32: Vec<f32> = samples.iter().map(|v| *v as f32).collect();
    let r32 = rearrange_decreasing(&BoundaryFunction::from_samples(s32, false).unwrap()).unwrap();
    assert_eq!(r64.permutation, r32.permutation);
}
