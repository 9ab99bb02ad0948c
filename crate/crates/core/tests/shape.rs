use std::f64::consts::PI;

use fracmv::roots::linspace;
use fracmv::{
    comparison_check, convexity_equivalence, delta_increasing_check, monotonicity_certificate,
    periodicity_defect, property_p_check, reconstruct_difference, sample_pairs,
    windowed_derivative, Expression, FracError, Outcome, Params, ShapeProperty, Window,
    WindowConvention, WindowPairSample,
};
use proptest::prelude::*;
use statrs::function::gamma::gamma as ref_gamma;

fn ex(s: &str) -> Expression {
    Expression::parse(s).unwrap()
}

fn pairs() -> Vec<WindowPairSample<f64>> {
    sample_pairs(0.0, 2.0, 0.25, 32, 7).unwrap()
}

#[test]
fn pair_sampling_is_admissible_and_reproducible() {
    let a = sample_pairs(0.0, 4.0, 0.5, 32, 11).unwrap();
    let b = sample_pairs(0.0, 4.0, 0.5, 32, 11).unwrap();
    let c = sample_pairs(0.0, 4.0, 0.5, 32, 12).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for s in &a {
        assert!(s.x0 >= 0.0 && s.x0 + s.delta < s.y0 && s.y0 + s.delta <= 4.0);
    }
    // One x0 per stratum of the admissible range [0, 3).
    let mut strata: Vec<usize> = a.iter().map(|s| (s.x0 / 3.0 * 32.0) as usize).collect();
    strata.sort_unstable();
    assert_eq!(strata, (0..32).collect::<Vec<_>>());
    assert!(sample_pairs(0.0, 1.0, 0.5, 8, 0).is_err());
    assert!(WindowPairSample::new(0.0, 0.4, 0.5).is_err());
}

#[test]
fn power_windows_are_equal_when_anchored() {
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    for beta in [0.75, 1.0, 2.0, 3.0] {
        let f = ex(&format!("t^{beta}"));
        let expected =
            ref_gamma(1.0 + beta) / ref_gamma(beta - 0.5 + 1.0) * 0.25_f64.powf(beta - 0.5);
        for x0 in [0.0, 0.7, 1.5] {
            let w = Window::new(x0, 0.25)
                .unwrap()
                .with_convention(WindowConvention::Anchored);
            let v = fracmv::windowed_derivative_with(&f, &w, &p).unwrap();
            assert!(
                (v.value - expected).abs() <= 1e-6 * expected,
                "beta {beta} x0 {x0}"
            );
        }
        let v = delta_increasing_check(&f, &p, &pairs(), WindowConvention::Anchored).unwrap();
        assert!(v.holds());
        assert!(v.worst_margin.abs() <= 1e-6);
    }
}

#[test]
fn quadratic_windows_increase() {
    let values: Vec<f64> = [0.0, 1.0, 2.0]
        .iter()
        .map(|&x0| {
            windowed_derivative(&ex("t^2"), &Window::new(x0, 0.5).unwrap(), 0.5, 2048)
                .unwrap()
                .value
        })
        .collect();
    // (1/Γ(1/2)) ∫_{x0}^{x0+δ} 2t (x0+δ−t)^{−1/2} dt in closed form.
    for (k, &x0) in [0.0, 1.0, 2.0].iter().enumerate() {
        let d: f64 = 0.5;
        let exact = 2.0 * (2.0 * (x0 + d) * d.sqrt() - 2.0 / 3.0 * d.powf(1.5)) / PI.sqrt();
        assert!((values[k] - exact).abs() <= 1e-6 * exact);
    }
    assert!(values[0] < values[1] && values[1] < values[2]);

    let p = Params::new(0.5, 0.0, 1024).unwrap();
    let up = delta_increasing_check(&ex("t^2"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert!(up.holds());
    let down =
        delta_increasing_check(&ex("-t^2"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert_eq!(down.outcome, Outcome::Violated);
    assert_eq!(down.witnesses.len(), pairs().len());
    assert!(down.witnesses.iter().all(|w| w.margin > 0.0));
}

#[test]
fn property_p_examples() {
    let p = Params::new(0.5, 0.0, 1024).unwrap();
    let linear = property_p_check(&ex("t"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert!(linear.holds());
    assert_eq!(linear.property, ShapeProperty::PropertyP);
    let power = property_p_check(&ex("t^2"), &p, &pairs(), WindowConvention::Anchored).unwrap();
    assert!(power.holds());
    // Offsets are invariant under affine maps of f, and exp on an absolute
    // window is a rescaled copy of itself.
    let exp = property_p_check(&ex("exp(t)"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert!(exp.holds());
    let quad = property_p_check(&ex("t^2"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert_eq!(quad.outcome, Outcome::Violated);
    assert!(!quad.witnesses.is_empty());
    assert!(quad.witnesses.iter().all(|w| w.margin > 1e-6 * 0.25));
}

#[test]
fn linear_offsets_are_two_thirds_of_the_window() {
    let p = Params::new(0.5, 0.0, 1024).unwrap();
    for (x0, delta) in [(0.0, 0.25), (1.3, 0.25), (-2.0, 1.0)] {
        let q = p.with_base(x0).unwrap();
        let mut tol = *q.tolerances();
        tol.allow_nonzero_base = true;
        let m = fracmv::mean_value(&ex("t"), &q.with_tolerances(tol), x0 + delta, 64).unwrap();
        assert!((m.xi_sup.unwrap() - x0 - 2.0 * delta / 3.0).abs() < 1e-9);
    }
}

#[test]
fn convexity_corpus() {
    let p = Params::new(0.5, 0.0, 1024).unwrap();
    for (src, convex) in [
        ("t^2", true),
        ("exp(t) - 1 - t", true),
        ("t", true),
        ("-t^2", false),
    ] {
        let r = convexity_equivalence(&ex(src), &p, &pairs(), WindowConvention::Absolute).unwrap();
        assert!(r.p_gate.holds(), "{src}: {:?}", r.p_gate.outcome);
        assert_eq!(r.convex_sampled, convex, "{src}");
        assert_eq!(r.delta_incr.holds(), convex, "{src}");
        assert_eq!(r.equivalence, Some(true), "{src}");
        assert!(r.bridge_residual <= 1e-6, "{src}: {:e}", r.bridge_residual);
        assert_eq!(r.fprime_xi_monotone.holds(), convex, "{src}");
    }
    let linear = convexity_equivalence(&ex("t"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert!(linear.delta_incr.worst_margin.abs() <= 1e-9);
    let cubic =
        convexity_equivalence(&ex("t^3"), &p, &pairs(), WindowConvention::Absolute).unwrap();
    assert!(!cubic.p_gate.holds());
    assert_eq!(cubic.equivalence, None);
    assert!(convexity_equivalence(&ex("t"), &p, &[], WindowConvention::Absolute).is_err());
}

#[test]
fn monotonicity_examples() {
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    let linear = monotonicity_certificate(&ex("t"), &p, 0.1, 1.0).unwrap();
    assert!(linear.verdict.holds());
    assert!((linear.delta_f0 - 0.1).abs() < 1e-15);
    assert!(linear.reconstruction.max_error <= 1e-10);

    let q = Params::new(0.05, 0.0, 2048).unwrap();
    let sine = monotonicity_certificate(&ex("sin(t)"), &q, 0.2, PI / 2.0).unwrap();
    assert!(sine.verdict.holds(), "{:?}", sine.verdict.outcome);
    assert!(sine.min_delta_f >= 0.0);

    let falling = monotonicity_certificate(&ex("-t"), &p, 0.1, 1.0).unwrap();
    assert!(matches!(falling.verdict.outcome, Outcome::NotApplicable(_)));
    assert!(!falling.verdict.witnesses.is_empty());
    assert!(monotonicity_certificate(&ex("t"), &p, 1.5, 1.0).is_err());
}

#[test]
fn reconstruction_converges_at_second_order() {
    for (src, b) in [("t", 1.0), ("sin(t)", PI / 2.0), ("t^2*exp(-t)", 2.0)] {
        let errors: Vec<f64> = [256, 512, 1024, 2048]
            .iter()
            .map(|&n| {
                reconstruct_difference(&ex(src), 0.5, 0.1, b, n)
                    .unwrap()
                    .max_error
            })
            .collect();
        assert!(errors[3] <= 1e-4, "{src}: {errors:?}");
        for w in errors.windows(2) {
            assert!(w[1] <= 0.5 * w[0] + 1e-12, "{src}: {errors:?}");
        }
    }
}

#[test]
fn comparison_examples() {
    let p = Params::new(0.5, 0.0, 1024).unwrap();
    assert!(comparison_check(&ex("t"), &ex("2*t"), &p, 1.0)
        .unwrap()
        .holds());
    assert!(comparison_check(&ex("sin(t)"), &ex("sin(t)"), &p, 2.0)
        .unwrap()
        .holds());
    // D^α t² ≤ D^α t only up to x = Γ(2)Γ(2.5)/(Γ(3)Γ(1.5)) = 0.75.
    let gated = comparison_check(&ex("t^2"), &ex("t"), &p, 1.0).unwrap();
    assert!(matches!(gated.outcome, Outcome::NotApplicable(_)));
    assert!(gated.witnesses.iter().all(|w| w.at > 0.74));
    assert!(matches!(
        comparison_check(&ex("t"), &ex("t + 1"), &p, 1.0),
        Err(FracError::Hypothesis(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comparison_never_contradicts_its_conclusion(
        k in 0usize..4, c in 0.0f64..2.0, power in 1.0f64..3.0, alpha in 0.1f64..0.9,
    ) {
        let base = ["t", "sin(t)", "t*exp(-t)", "t^2"][k];
        let g = format!("{base} + {c}*t^{power}");
        let p = Params::new(alpha, 0.0, 512).unwrap();
        let v = comparison_check(&ex(base), &ex(&g), &p, 1.5).unwrap();
        prop_assert!(v.outcome != Outcome::Violated, "{} vs {}: {:?}", base, g, v);
    }
}

#[test]
fn periodicity_examples() {
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    let zero = periodicity_defect(&ex("0"), &p, 1.0, &linspace(0.0, 3.0, 16)).unwrap();
    assert_eq!(zero.outcome, Outcome::Measured(0.0));

    let tail: Vec<f64> = linspace(2.0 * PI, 8.0 * PI, 12);
    let sine = periodicity_defect(&ex("sin(t)"), &p, 2.0 * PI, &tail).unwrap();
    let Outcome::Measured(defect) = sine.outcome else {
        panic!("periodicity is a measurement");
    };
    assert!(defect > 0.0 && defect.is_finite());
    // The memory tail decays: the defect late in the range is below the early one.
    let early = periodicity_defect(&ex("sin(t)"), &p, 2.0 * PI, &[2.0 * PI]).unwrap();
    let late = periodicity_defect(&ex("sin(t)"), &p, 2.0 * PI, &[8.0 * PI]).unwrap();
    assert!(late.worst_margin < early.worst_margin);

    assert!(matches!(
        periodicity_defect(&ex("sin(t)"), &p, PI, &tail),
        Err(FracError::Hypothesis(_))
    ));
}
