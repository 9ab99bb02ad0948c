use fracmv::{
    mean_value, mean_value_polynomial, prop27_witness, rl_integral, xi_smoothness_profile, Backend,
    Expression, FnValue, FracError, Params,
};
use statrs::function::gamma::gamma as ref_gamma;

fn ex(s: &str) -> Expression {
    Expression::parse(s).unwrap()
}

/// ξ/x for f = t^β, a = 0, from the exact value of I^{1−α} t^β.
fn power_ratio(beta: f64, alpha: f64) -> f64 {
    (ref_gamma(2.0 - alpha) * ref_gamma(beta + 1.0) / ref_gamma(beta + 2.0 - alpha))
        .powf(1.0 / beta)
}

#[test]
fn linear_mean_value_is_two_thirds() {
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    let m = mean_value(&ex("t"), &p, 1.0, 64).unwrap();
    assert_eq!(m.lambda_set.len(), 1);
    assert!((m.xi_sup.unwrap() - 2.0 / 3.0).abs() <= 1e-9);
    assert!(!m.degenerate);
    for alpha in [0.2, 0.5, 0.8] {
        let p = Params::new(alpha, 0.0, 2048).unwrap();
        let ratios: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&x| mean_value(&ex("t"), &p, x, 64).unwrap().xi_sup.unwrap() / x)
            .collect();
        for r in &ratios {
            assert!(
                (r - power_ratio(1.0, alpha)).abs() <= 1e-9,
                "alpha {alpha}: {ratios:?}"
            );
        }
    }
}

#[test]
fn quadratic_uses_the_corrected_ratio() {
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    let expected = (ref_gamma(1.5) * 2.0 / ref_gamma(3.5)).sqrt();
    assert!((expected - 0.730_296_7).abs() < 1e-7);
    for x in [0.5, 1.0, 2.0] {
        let xi = mean_value(&ex("t^2"), &p, x, 64).unwrap().xi_sup.unwrap();
        assert!((xi / x - expected).abs() <= 1e-6);
    }
}

#[test]
fn defining_identity_and_residuals() {
    for (src, x) in [
        ("sin(t)", 2.5),
        ("t*exp(-t)", 3.0),
        ("t^2*(1 - t)", 1.2),
        ("log(1 + t)", 4.0),
    ] {
        let f = ex(src);
        for alpha in [0.25, 0.5, 0.75] {
            let p = Params::new(alpha, 0.0, 2048).unwrap();
            let m = mean_value(&f, &p, x, 256).unwrap();
            assert!(!m.lambda_set.is_empty(), "{src}");
            assert!(m.lambda_set.windows(2).all(|w| w[0].x < w[1].x));
            assert_eq!(m.xi_sup, m.lambda_set.last().map(|r| r.x));
            let scale = 1.0 + m.integral.value.abs();
            for root in &m.lambda_set {
                assert!(root.x > 0.0 && root.x < x);
                let r = m.defining_residual(&f, &p, root.x).unwrap();
                assert!(r <= 1e-8 * scale, "{src} alpha {alpha}: {r:e}");
            }
        }
    }
}

#[test]
fn monotone_functions_have_one_mean_value() {
    for src in ["t", "t^3", "exp(t) - 1", "sqrt(t)", "log(1 + t)", "-t^2"] {
        let p = Params::new(0.4, 0.0, 2048).unwrap();
        let m = mean_value(&ex(src), &p, 1.7, 128).unwrap();
        assert_eq!(m.lambda_set.len(), 1, "{src}");
    }
}

#[test]
fn level_between_extremes_is_always_attained() {
    // sin on [0, 3π] oscillates; g lies between the sampled min and max.
    let p = Params::new(0.6, 0.0, 2048).unwrap();
    let m = mean_value(&ex("sin(t)"), &p, 3.0 * std::f64::consts::PI, 512).unwrap();
    assert!(m.target_g > -1.0 && m.target_g < 1.0);
    assert!(m.lambda_set.len() >= 2);
}

#[test]
fn constant_function_is_degenerate() {
    let p = Params::new(0.5, 0.0, 512).unwrap();
    assert!(matches!(
        mean_value(&ex("2"), &p, 1.0, 32),
        Err(FracError::NonzeroBase { .. })
    ));
    let mut tol = *p.tolerances();
    tol.allow_nonzero_base = true;
    let m = mean_value(&ex("2"), &p.with_tolerances(tol), 1.0, 32).unwrap();
    assert!(m.degenerate);
    assert!(m.xi_sup.is_none());
    assert!((m.target_g - 2.0).abs() < 1e-10);
}

#[test]
fn scan_and_range_are_validated() {
    let p = Params::new(0.5, 0.0, 512).unwrap();
    assert!(matches!(
        mean_value(&ex("t"), &p, 1.0, 8),
        Err(FracError::InvalidParameter(_))
    ));
    assert!(matches!(
        mean_value(&ex("t"), &p, -1.0, 64),
        Err(FracError::InvalidParameter(_))
    ));
}

#[test]
fn polynomial_estimate_matches_mean_value() {
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    let linear = mean_value_polynomial(&ex("t"), &p, 1.0, 1).unwrap();
    assert_eq!(linear.coefficients.len(), 2);
    assert_eq!(linear.remainder_term, 0.0);
    assert!((linear.xi_sup().unwrap() - 2.0 / 3.0).abs() <= 1e-10);

    for src in ["t^2", "t^3 - 2*t", "t^4 + t", "3*t - t^2 + 0.5*t^3"] {
        for alpha in [0.3, 0.5, 0.7] {
            let p = Params::new(alpha, 0.0, 2048).unwrap();
            let est = mean_value_polynomial(&ex(src), &p, 0.8, 4).unwrap();
            assert_eq!(est.remainder_term, 0.0, "{src}");
            assert!(est.roots_in_range.iter().all(|r| r.x > 0.0 && r.x < 0.8));
            let direct = mean_value(&ex(src), &p, 0.8, 256).unwrap();
            let gap = (est.xi_sup().unwrap() - direct.xi_sup.unwrap()).abs();
            assert!(gap <= 1e-8, "{src} alpha {alpha}: {gap:e}");
        }
    }

    let sine = mean_value_polynomial(&ex("sin(t)"), &p, 0.1, 4).unwrap();
    assert!(!sine.remainder_dominant);
    let direct = mean_value(&ex("sin(t)"), &p, 0.1, 256).unwrap();
    assert!((sine.xi_sup().unwrap() - direct.xi_sup.unwrap()).abs() <= 1e-6);
}

#[test]
fn remainder_uses_orders_above_one() {
    // R = I^{n+2−α} f^{(n+1)}(a+δ); for f = exp and a = 0 the exact value is
    // Σ_k δ^{k+n+2−α}/Γ(k+n+3−α).
    let (alpha, delta, n) = (0.4, 0.5, 2);
    let p = Params::new(alpha, 0.0, 2048).unwrap();
    let est = mean_value_polynomial(&ex("exp(t)"), &p, delta, n).unwrap();
    let mu = n as f64 + 2.0 - alpha;
    let exact: f64 = (0..40)
        .map(|k| delta.powf(k as f64 + mu) / ref_gamma(k as f64 + mu + 1.0))
        .sum();
    assert!(
        (est.remainder_term - exact).abs() <= 1e-9 * exact,
        "{} vs {exact}",
        est.remainder_term
    );
}

#[test]
fn oracle_and_product_rule_agree_on_the_level() {
    let f = ex("t*exp(-t)");
    let p = Params::new(0.35, 0.0, 4096).unwrap();
    let fast = mean_value(
        &f,
        &p.with_backend(Backend::ProductTrapezoid),
        2.0,
        128,
    )
    .unwrap();
    let slow = mean_value(&f, &p, 2.0, 128).unwrap();
    assert!((fast.xi_sup.unwrap() - slow.xi_sup.unwrap()).abs() < 1e-6);
    let direct = rl_integral(&f, &p, 0.65, 2.0).unwrap();
    assert!((slow.integral.value - direct.value).abs() <= 10.0 * direct.est_error);
}

#[test]
fn smoothness_profile_examples() {
    let grid: Vec<f64> = (1..=12).map(|i| i as f64 * 0.25).collect();
    let p = Params::new(0.5, 0.0, 2048).unwrap();
    for point in xi_smoothness_profile(&ex("t"), &p, &grid, 64).unwrap() {
        assert!((point.xi - 2.0 * point.x / 3.0).abs() < 1e-9);
        assert!((point.slope - 2.0 / 3.0).abs() < 1e-6);
    }
    let ratio = (ref_gamma(1.5) * ref_gamma(3.0) / ref_gamma(3.5)).sqrt();
    for point in xi_smoothness_profile(&ex("t^2"), &p, &grid, 64).unwrap() {
        assert!((point.xi / point.x - ratio).abs() < 1e-6);
    }
    let q = Params::new(0.3, 0.0, 2048).unwrap();
    let profile = xi_smoothness_profile(&ex("exp(t) - 1"), &q, &grid, 64).unwrap();
    let slopes: Vec<f64> = profile.iter().map(|pt| pt.slope).collect();
    let jumps: Vec<f64> = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for k in 1..jumps.len() - 1 {
        let neighbours = jumps[k - 1].max(jumps[k + 1]).max(1e-12);
        assert!(
            jumps[k] <= 10.0 * neighbours,
            "slope jump at {}: {slopes:?}",
            profile[k].x
        );
    }
    assert!(matches!(
        xi_smoothness_profile(&ex("sin(t)"), &p, &[1.0, 4.0], 64),
        Err(FracError::Hypothesis(_))
    ));
}

#[test]
fn witness_search_does_not_fabricate() {
    let p = Params::new(0.5, 0.0, 1024).unwrap();
    let grid: Vec<f64> = (1..=40).map(|i| i as f64 * 0.05).collect();
    let identity = FnValue(|x: f64| Ok(x));
    assert!(prop27_witness(&ex("t"), &identity, &p, &grid)
        .unwrap()
        .is_none());
    // With h ≡ 0, R = D^α t > 0 on the whole grid.
    let zero = FnValue(|_: f64| Ok(0.0));
    assert!(prop27_witness(&ex("t"), &zero, &p, &grid)
        .unwrap()
        .is_none());
}

#[test]
fn witness_for_constant_map() {
    // R(x) = x^{1−α}/Γ(2−α) − c x^{−α}/Γ(1−α) vanishes at x = c(1−α).
    let alpha = 0.5;
    let p = Params::new(alpha, 0.0, 2048).unwrap();
    let x_star = 1.2;
    let c = 2.0 * x_star / 3.0;
    let h = FnValue(move |_: f64| Ok(c));
    let grid: Vec<f64> = (1..=60).map(|i| i as f64 * 0.04).collect();
    let root = prop27_witness(&ex("t"), &h, &p, &grid)
        .unwrap()
        .expect("a sign change of R");
    assert!((root.x - c * (1.0 - alpha)).abs() < 1e-6, "{}", root.x);
}
