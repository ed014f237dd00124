use super::*;
use crate::boundary::BoundaryFunction;
use crate::config::Tolerances;
use crate::quadrature::Breakpoint;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn log_gap_grid(m: usize) -> BoundaryFunction<f64> {
    BoundaryFunction::from_singular_fn(
        m,
        |t: f64| (2.0 * (t / 2.0).sin().abs()).ln(),
        vec![Breakpoint::plain(0.0)],
        &GridConfig::default(),
    )
    .unwrap()
}

#[test]
fn eval_examples() {
    let atom = HardyFunction::inner(InnerSpec::singular(vec![SingularAtom { zeta: c(1.0, 0.0), mass: 1.0 }]).unwrap()).unwrap();
    assert!((atom.eval(c(0.0, 0.0)).unwrap() - c((-1.0f64).exp(), 0.0)).norm() < 1e-15);
    let z = HardyFunction::inner(InnerSpec::blaschke(vec![c(0.0, 0.0)]).unwrap()).unwrap();
    assert_eq!(z.eval(c(0.3, 0.0)).unwrap(), c(0.3, 0.0));
    let f = HardyFunction::exp_neg_c_over_gap(2.0).unwrap();
    assert!((f.eval(c(0.0, 0.0)).unwrap() - c((-2.0f64).exp(), 0.0)).norm() < 1e-16);
    assert!(f.eval(c(1.0, 0.0)).is_err());
}

#[test]
fn outer_from_zero_and_from_log_gap() {
    let one = HardyFunction::outer_from_log_modulus(BoundarySpec::Grid(BoundaryFunction::constant(64, 0.0).unwrap())).unwrap();
    assert_eq!(one.eval(c(0.7, -0.2)).unwrap(), c(1.0, 0.0));

    let phi = HardyFunction::outer_from_log_modulus(BoundarySpec::Grid(log_gap_grid(4096))).unwrap();
    assert!((phi.eval(c(0.5, 0.0)).unwrap().norm() - 0.5).abs() < 1e-6);
    for z in [c(0.3, 0.4), c(-0.9, 0.0), c(0.0, 0.99)] {
        assert!((phi.eval(z).unwrap() - (c(1.0, 0.0) - z)).norm() < 1e-6, "{z}");
    }
    let rep = outer_deficit(&phi, &tol()).unwrap();
    assert!(rep.deficit.abs() < 1e-6);
    assert_eq!(rep.status, OuterStatus::Outer);
}

#[test]
fn outer_from_closed_form_log_modulus() {
    // W = -Re (1 - e^(it))^(-1/2) reproduces exp(-(1 - z)^(-1/2))
    let a = 0.5;
    let w = BoundaryFunction::from_singular_fn(
        4096,
        move |t: f64| -(2.0 * (t / 2.0).sin().abs()).powf(-a) * (a * (std::f64::consts::PI - t.abs()) / 2.0).cos(),
        vec![Breakpoint {
            at: 0.0,
            side_mass: Some(std::sync::Arc::new(move |x: f64| -(a * std::f64::consts::PI / 2.0).cos() * x.powf(1.0 - a) / (1.0 - a))),
        }],
        &GridConfig::default(),
    )
    .unwrap();
    let phi = HardyFunction::outer_from_log_modulus(BoundarySpec::Grid(w)).unwrap();
    let closed = HardyFunction::exp_neg_c_power(1.0, a).unwrap();
    for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.2, -0.7), c(0.95, 0.1)] {
        let (u, v) = (phi.eval(z).unwrap(), closed.eval(z).unwrap());
        assert!((u - v).norm() < 1e-6 * v.norm().max(1e-3), "{z}: {u} vs {v}");
    }
}

#[test]
fn singular_inner_example_deficit() {
    let f = HardyFunction::exp_neg_c_over_gap(2.0).unwrap();
    let rep = outer_deficit(&f, &tol()).unwrap();
    assert!((rep.boundary_mean_log + 1.0).abs() < 1e-8);
    assert_eq!(rep.log_mod_at_0, -2.0);
    assert!((rep.deficit - 1.0).abs() < 1e-6);
    assert_eq!(rep.status, OuterStatus::HasInnerPart);
    // the grid sees |f| = e^(-1) everywhere on the circle
    let l = f.boundary_log_modulus(1024).unwrap();
    assert!(l.iter().all(|v| (v + 1.0).abs() < 1e-14));
}

#[test]
fn jensen_correction() {
    let g = HardyFunction::outer_from_log_modulus(BoundarySpec::Grid(log_gap_grid(1024))).unwrap();
    let a = c(0.3, 0.0);
    let f = HardyFunction::product(vec![HardyFunction::inner(InnerSpec::blaschke(vec![a]).unwrap()).unwrap(), g]).unwrap();
    let rep = outer_deficit(&f, &tol()).unwrap();
    assert!(rep.deficit.abs() < 1e-10, "{}", rep.deficit);
    assert_eq!(rep.status, OuterStatus::HasInnerPart);
    // Jensen on samples: an undeclared zero shows up as deficit log(1 / |a|)
    let chain = SchurChain::new(vec![a], vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
    let b = HardyFunction::schur(chain).unwrap();
    let shifted = HardyFunction::new(
        HardyExpr::Affine {
            offset: c(0.0, 0.0),
            scale: c(1.0, 0.0),
            inner: Box::new(HardyExpr::Product {
                factors: vec![b.expr.clone(), HardyExpr::Constant { value: c(2.0, 0.0) }],
            }),
            half_plane_angle: None,
        },
        false,
        false,
    )
    .unwrap();
    // the chain with gamma = 0 and tail 1 at node a is b_a(z) = (z - a) / (1 - a z); value at 0 is -a
    assert!((b.eval(c(0.0, 0.0)).unwrap() + a).norm() < 1e-15);
    let rep = outer_deficit(&shifted, &tol()).unwrap();
    let oracle: f64 = {
        // mean of log|2 b(e^(it))| is log 2 exactly; log|f(0)| = log(2 |a|)
        2f64.ln() - (2.0 * a.norm()).ln()
    };
    assert!((rep.deficit - oracle).abs() < 1e-10, "{} vs {oracle}", rep.deficit);
    assert_eq!(rep.status, OuterStatus::HasInnerPart);
}

#[test]
fn deficit_is_additive() {
    let f = HardyFunction::exp_neg_c_over_gap(2.0).unwrap();
    let g = HardyFunction::exp_neg_c_power(1.5, 0.3).unwrap();
    let h = HardyFunction::cayley(c(0.5, 0.0)).unwrap();
    let fg = HardyFunction::product(vec![f.clone(), g.clone(), h.clone()]).unwrap();
    let d = |x: &HardyFunction| outer_deficit(x, &tol()).unwrap().deficit;
    assert!((d(&fg) - d(&f) - d(&g) - d(&h)).abs() < 1e-8);
    assert!(d(&g).abs() < 1e-8);
}

#[test]
fn bounded_outer_example() {
    let f = HardyFunction::exp_neg_c_power(1.0, 0.5).unwrap();
    let sup = f.boundary_sup(1 << 14).unwrap();
    assert!(sup <= (-0.5f64).exp() + 1e-8);
    let rep = outer_deficit(&f, &tol()).unwrap();
    assert!(rep.deficit.abs() <= 1e-6, "{}", rep.deficit);
    assert_eq!(rep.status, OuterStatus::Outer);
}

#[test]
fn power_outer_examples() {
    let f = HardyFunction::one_minus_z();
    let z = c(0.0, 0.5);
    let sq = power_outer(&f, 2.0, &tol()).unwrap();
    assert!((sq.eval(z).unwrap() - (c(1.0, 0.0) - z).powi(2)).norm() < 1e-8);
    let same = power_outer(&f, 1.0, &tol()).unwrap();
    assert!((same.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-15);
    assert!(outer_deficit(&sq, &tol()).unwrap().deficit.abs() < 1e-10);
    assert!(power_outer(&f, 0.0, &tol()).is_err());
    assert!(power_outer(&HardyFunction::exp_neg_c_over_gap(1.0).unwrap(), 2.0, &tol()).is_err());

    let phi = HardyFunction::outer_from_log_modulus(BoundarySpec::Grid(log_gap_grid(4096))).unwrap();
    let cube = power_outer(&phi, 3.0, &tol()).unwrap();
    assert!((cube.eval(c(0.5, 0.0)).unwrap().norm() - 0.125).abs() < 1e-6);
}

#[test]
fn power_fn_examples() {
    let e = HardyFunction::constant(c(std::f64::consts::E, 0.0)).unwrap();
    let one = HardyFunction::constant(c(1.0, 0.0)).unwrap();
    let (f, cert) = power_fn(&e, &one, &tol()).unwrap();
    assert!((f.eval(c(0.4, 0.1)).unwrap() - c(std::f64::consts::E, 0.0)).norm() < 1e-14);
    assert_eq!(cert.status, PowerFnStatus::BoundedOuter);

    // e^(-(1+z)/(1-z)) is a singular inner function
    let psi = HardyFunction::cayley(c(-1.0, 0.0)).unwrap();
    let (f, cert) = power_fn(&e, &psi, &tol()).unwrap();
    assert_eq!(cert.status, PowerFnStatus::Uncertified);
    let rep = outer_deficit(&f, &tol()).unwrap();
    assert!((rep.deficit - 1.0).abs() < 1e-6);
    assert_eq!(rep.status, OuterStatus::HasInnerPart);

    // bounded psi with positive real part: 1.5 + 0.5 * (chain through 0.2)
    let chain = SchurChain::new(vec![c(0.5, 0.0)], vec![c(0.2, 0.1)], c(0.6, 0.0)).unwrap();
    let psi = HardyFunction::new(
        HardyExpr::Affine {
            offset: c(1.5, 0.0),
            scale: c(0.5, 0.0),
            inner: Box::new(HardyExpr::Schur(chain)),
            half_plane_angle: Some(0.0),
        },
        true,
        true,
    )
    .unwrap();
    let (f, cert) = power_fn(&HardyFunction::one_minus_z(), &psi, &tol()).unwrap();
    assert_eq!(cert.status, PowerFnStatus::BoundedOuter);
    assert!(cert.min_re_psi >= 1.0 - 1e-12);
    assert!(cert.sampled_sup <= cert.bound.unwrap());
    let rep = outer_deficit(&f, &tol()).unwrap();
    assert!(rep.deficit.abs() < 1e-6, "{}", rep.deficit);
}

#[test]
fn json_round_trip() {
    let js = r#"{"expr":{"type":"product","factors":[
        {"type":"exp_neg_c_over_gap","c":2.0},
        {"type":"inner","zeros":[[0.3,0.0]]},
        {"type":"outer","log_modulus":{"profile":{"kind":"power","alpha":0.5},"M":1024}}
    ]},"arg_l1":false}"#;
    let f: HardyFunction = serde_json::from_str(js).unwrap();
    f.expr.validate(&f.grid).unwrap();
    let back: HardyFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    let z = c(0.2, 0.3);
    assert_eq!(f.eval(z).unwrap(), back.eval(z).unwrap());
    assert!(serde_json::from_str::<HardyFunction>(r#"{"expr":{"type":"nope"}}"#).is_err());
}

#[test]
fn profile_outer_is_outer_and_decays() {
    let h = WeightProfile::power(0.5).unwrap();
    let phi = HardyFunction::outer_from_profile(&h, 1.0, 4096).unwrap();
    let rep = outer_deficit(&phi, &tol()).unwrap();
    assert!(rep.deficit.abs() < 1e-10, "{}", rep.deficit);
    assert_eq!(rep.status, OuterStatus::Outer);
    // |phi| <= 1 and the value at 0 is exp(-(1 / pi) integral_0^1 h)
    let v0 = phi.eval(c(0.0, 0.0)).unwrap();
    assert!((v0.re - (-1.0 / std::f64::consts::PI).exp()).abs() < 1e-12);
    assert!(phi.eval(c(0.999, 0.0)).unwrap().norm() < 1.0);
}
