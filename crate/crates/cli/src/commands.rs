//! One function per subcommand, each producing a [`Report`].

use fracmv::fracops::DerivativeFn;
use fracmv::roots::linspace;
use fracmv::{
    alpha_grid, caputo_derivative, convexity_equivalence, critical_points, dilation_scenario,
    mean_value, mean_value_polynomial, monotonicity_certificate, periodicity_defect, r_alpha_curve,
    rl_derivative, rl_integral, sample_pairs, Backend, DerivativeMethod, Expression, Outcome,
    Params, ScalarFn, ShapeVerdict, Tolerances, WindowConvention,
};

use crate::args::{
    BackendArg, Common, ConvexityArgs, CritArgs, DerivArgs, DilationArgs, MeanArgs, MethodArg,
    MonoArgs, PeriodicArgs, PointArgs, PolyArgs, RAlphaArgs,
};
use crate::report::{Cell, Report};
use crate::CliError;

/// A finished command: its report plus diagnostics for the error stream.
pub struct Output {
    pub report: Report,
    pub warnings: Vec<String>,
}

impl From<Report> for Output {
    fn from(report: Report) -> Self {
        Self {
            report,
            warnings: Vec::new(),
        }
    }
}

fn parse_f(source: &str) -> Result<Expression, CliError> {
    Expression::parse(source).map_err(|e| CliError::Usage(format!("--f: {e}")))
}

/// `v` or `start:stop:count`; sweeps are clipped into [0.01, 0.99].
pub fn parse_alpha(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--alpha: expected a number or start:stop:count, got `{spec}`"
        ))
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [start, stop, count] => {
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(CliError::Usage(
                    "--alpha: sweep count must be at least 1".into(),
                ));
            }
            let (start, stop) = (num(start)?, num(stop)?);
            if !start.is_finite() || !stop.is_finite() {
                return Err(bad());
            }
            Ok(alpha_grid(start, stop, count))
        }
        _ => Err(bad()),
    }
}

fn single_alpha(spec: &str) -> Result<f64, CliError> {
    match parse_alpha(spec)?.as_slice() {
        [alpha] => Ok(*alpha),
        _ => Err(CliError::Usage(
            "--alpha: this command takes a single order".into(),
        )),
    }
}

fn tolerances(c: &Common) -> Result<Tolerances<f64>, CliError> {
    let mut tol = Tolerances {
        allow_nonzero_base: c.allow_nonzero_base,
        ..Tolerances::default()
    };
    if let Some(t) = c.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Usage(format!(
                "--tol must lie in (0, 1), got {t}"
            )));
        }
        tol.oracle_rel = t;
        tol.root_rel = t;
    }
    Ok(tol)
}

fn params(alpha: f64, a: f64, c: &Common) -> Result<Params, CliError> {
    let mut p = Params::new(alpha, a, c.grid_n)?.with_tolerances(tolerances(c)?);
    if let Some(b) = c.backend {
        p = p.with_backend(match b {
            BackendArg::Product => Backend::ProductTrapezoid,
            BackendArg::Oracle => Backend::AdaptiveOracle,
        });
    }
    Ok(p)
}

fn echo(r: &mut Report, command: &str, f: &str, alpha: &str, c: &Common) {
    r.meta("command", command);
    r.meta("f", f);
    r.meta("alpha", alpha);
    r.meta("grid_n", c.grid_n);
    if let Some(b) = c.backend {
        r.meta("backend", format!("{b:?}").to_lowercase());
    }
    if let Some(t) = c.tol {
        r.meta_num("tol", t);
    }
    if c.allow_nonzero_base {
        r.meta("allow_nonzero_base", true);
    }
}

fn base_warning(f: &Expression, p: &Params) -> Result<Option<String>, CliError> {
    let fa = f.eval(p.a())?;
    Ok((fa.abs() > p.tolerances().base_zero).then(|| {
        format!(
            "warning: f(a) = {fa:e} is not 0; values follow Caputo semantics (f(a) = 0 is assumed by the theory)"
        )
    }))
}

pub fn fracint(args: &PointArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let mut r = Report::new(&["alpha", "x", "value", "est_error", "backend"]);
    let mut worst = 0.0_f64;
    for alpha in parse_alpha(&args.alpha)? {
        let p = params(alpha, args.a, &args.common)?;
        let v = rl_integral(&f, &p, alpha, args.x)?;
        worst = worst.max(v.est_error);
        r.row(vec![
            alpha.into(),
            args.x.into(),
            v.value.into(),
            v.est_error.into(),
            v.backend.name().into(),
        ]);
    }
    echo(&mut r, "fracint", &args.f, &args.alpha, &args.common);
    r.meta_num("a", args.a);
    r.meta_num("max_est_error", worst);
    Ok(r.into())
}

pub fn fracderiv(args: &DerivArgs) -> Result<Output, CliError> {
    let pt = &args.point;
    let f = parse_f(&pt.f)?;
    let method = match args.method {
        MethodArg::Caputo => DerivativeMethod::CaputoForm,
        MethodArg::Direct => DerivativeMethod::Direct,
    };
    let mut r = Report::new(&["alpha", "x", "value", "est_error", "backend", "method"]);
    let mut warnings = Vec::new();
    let mut worst = 0.0_f64;
    for alpha in parse_alpha(&pt.alpha)? {
        let p = params(alpha, pt.a, &pt.common)?;
        let warning = if pt.common.allow_nonzero_base {
            base_warning(&f, &p)?
        } else {
            None
        };
        let caputo = warning.is_some();
        if let Some(w) = warning {
            if warnings.is_empty() {
                warnings.push(w);
            }
        }
        let v = if caputo {
            caputo_derivative(&f, &p, pt.x)?
        } else {
            rl_derivative(&f, &p, pt.x, method)?
        };
        worst = worst.max(v.est_error);
        let method_name = match (caputo, args.method) {
            (true, _) => "caputo",
            (false, MethodArg::Caputo) => "caputo_form",
            (false, MethodArg::Direct) => "direct",
        };
        r.row(vec![
            alpha.into(),
            pt.x.into(),
            v.value.into(),
            v.est_error.into(),
            v.backend.name().into(),
            method_name.into(),
        ]);
    }
    echo(&mut r, "fracderiv", &pt.f, &pt.alpha, &pt.common);
    r.meta_num("a", pt.a);
    r.meta_num("max_est_error", worst);
    Ok(Output {
        report: r,
        warnings,
    })
}

pub fn meanvalue(args: &MeanArgs) -> Result<Output, CliError> {
    let pt = &args.point;
    let f = parse_f(&pt.f)?;
    let mut r = Report::new(&["alpha", "x", "target_g", "xi", "residual", "is_sup"]);
    let mut degenerate = Vec::new();
    for alpha in parse_alpha(&pt.alpha)? {
        let p = params(alpha, pt.a, &pt.common)?;
        let m = mean_value(&f, &p, pt.x, args.scan_n)?;
        if m.degenerate {
            degenerate.push(alpha);
            r.row(vec![
                alpha.into(),
                pt.x.into(),
                m.target_g.into(),
                Cell::Missing,
                Cell::Missing,
                Cell::Missing,
            ]);
            continue;
        }
        for root in &m.lambda_set {
            let is_sup = m.xi_sup == Some(root.x);
            r.row(vec![
                alpha.into(),
                pt.x.into(),
                m.target_g.into(),
                root.x.into(),
                root.residual.into(),
                is_sup.into(),
            ]);
        }
    }
    echo(&mut r, "meanvalue", &pt.f, &pt.alpha, &pt.common);
    r.meta_num("a", pt.a);
    r.meta("scan_n", args.scan_n);
    if !degenerate.is_empty() {
        let list: Vec<String> = degenerate.iter().map(|a| a.to_string()).collect();
        r.meta(
            "degenerate",
            format!("f is constant at the level for alpha in [{}]; every point of (a, x) is a mean value", list.join(", ")),
        );
    }
    Ok(r.into())
}

pub fn polyxi(args: &PolyArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let alpha = single_alpha(&args.alpha)?;
    let p = params(alpha, args.a, &args.common)?;
    let est = mean_value_polynomial(&f, &p, args.delta, args.n)?;
    let mut r = Report::new(&["s", "xi", "residual"]);
    for root in &est.roots_in_range {
        r.row(vec![
            root.x.into(),
            (est.a + root.x).into(),
            root.residual.into(),
        ]);
    }
    echo(&mut r, "polyxi", &args.f, &args.alpha, &args.common);
    r.meta_num("a", args.a);
    r.meta_num("delta", args.delta);
    r.meta("n", args.n);
    let coeffs: Vec<String> = est
        .coefficients
        .iter()
        .map(|&c| crate::report::csv_number(c))
        .collect();
    r.meta("coefficients", coeffs.join(" "));
    r.meta_num("remainder_term", est.remainder_term);
    r.meta_num("truncation_bound", est.truncation_bound);
    let mut warnings = Vec::new();
    if est.remainder_dominant {
        r.meta("remainder_dominant", true);
        warnings.push("warning: the remainder term exceeds every retained series term; the estimate is unreliable".into());
    }
    Ok(Output {
        report: r,
        warnings,
    })
}

pub fn critpoints(args: &CritArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let mut r = Report::new(&["alpha", "root", "residual", "bracket_lo", "bracket_hi"]);
    for alpha in parse_alpha(&args.alpha)? {
        let p = params(alpha, args.a, &args.common)?;
        let report = critical_points(&f, &p, args.b, args.scan_n)?;
        for root in &report.roots {
            r.row(vec![
                alpha.into(),
                root.x.into(),
                root.residual.into(),
                root.bracket.0.into(),
                root.bracket.1.into(),
            ]);
        }
    }
    echo(&mut r, "critpoints", &args.f, &args.alpha, &args.common);
    r.meta_num("a", args.a);
    r.meta_num("b", args.b);
    r.meta("scan_n", args.scan_n);
    Ok(r.into())
}

pub fn ralpha(args: &RAlphaArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let alphas = parse_alpha(&args.alpha)?;
    tolerances(&args.common)?;
    let curve = r_alpha_curve(
        &f,
        args.a,
        args.b,
        args.x0,
        args.eps,
        &alphas,
        args.common.grid_n,
        args.scan_n,
    )?;
    let mut r = Report::new(&["alpha", "r_alpha", "global_largest"]);
    for s in &curve.samples {
        r.row(vec![
            s.alpha.into(),
            s.r_alpha.into(),
            s.global_largest.into(),
        ]);
    }
    echo(&mut r, "ralpha", &args.f, &args.alpha, &args.common);
    r.meta_num("a", args.a);
    r.meta_num("b", args.b);
    r.meta_num("x0", args.x0);
    r.meta_num("eps", args.eps);
    r.meta_num("x0_max", curve.x0_max);
    r.meta_num("x1_root", curve.x1_root);
    if let Some(g) = curve.gap_small_alpha {
        r.meta_num("gap_small_alpha", g);
    }
    if let Some(g) = curve.gap_large_alpha {
        r.meta_num("gap_large_alpha", g);
    }
    r.meta("monotone", curve.monotone);
    Ok(r.into())
}

pub fn dilation(args: &DilationArgs) -> Result<Output, CliError> {
    let v = parse_f(&args.f)?;
    let alpha = single_alpha(&args.alpha)?;
    if args.scan_n < 1 || !(args.b > args.a) {
        return Err(CliError::Usage(
            "dilation needs b > a and --scan-n >= 1".into(),
        ));
    }
    let p = params(alpha, args.a, &args.common)?;
    let grid = linspace(args.a, args.b, args.scan_n);
    let d = dilation_scenario(&v, &p, &grid)?;
    let mut r = Report::new(&["t", "velocity"]);
    for &(t, vel) in &d.rows {
        r.row(vec![t.into(), vel.into()]);
    }
    echo(&mut r, "dilation", &args.f, &args.alpha, &args.common);
    r.meta_num("a", args.a);
    r.meta_num("b", args.b);
    if let Some(t) = d.vanishing_at {
        r.meta_num("v_vanishes_at", t);
    }
    if let Some(z) = d.observer_zero {
        r.meta_num("observer_zero", z.xi);
        r.meta_num("observer_zero_residual", z.residual);
    }
    Ok(r.into())
}

fn outcome_name(o: &Outcome<f64>) -> String {
    match o {
        Outcome::Holds => "holds".into(),
        Outcome::Violated => "violated".into(),
        Outcome::NotApplicable(why) => format!("not_applicable ({why})"),
        Outcome::Inconclusive(why) => format!("inconclusive ({why})"),
        Outcome::Measured(v) => format!("measured {}", crate::report::csv_number(*v)),
    }
}

fn verdict_row(name: &str, v: &ShapeVerdict<f64>) -> Vec<Cell> {
    vec![
        name.into(),
        outcome_name(&v.outcome).into(),
        v.worst_margin.into(),
        v.witnesses.len().into(),
        v.samples.into(),
    ]
}

pub fn convexity(args: &ConvexityArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let alpha = single_alpha(&args.alpha)?;
    let p = params(alpha, args.a, &args.common)?;
    let pairs = sample_pairs(args.a, args.b, args.delta, args.n, args.seed)?;
    let convention = if args.anchored {
        WindowConvention::Anchored
    } else {
        WindowConvention::Absolute
    };
    let c = convexity_equivalence(&f, &p, &pairs, convention)?;
    let mut r = Report::new(&["check", "outcome", "worst_margin", "witnesses", "samples"]);
    let convex = if c.convex_sampled {
        "holds"
    } else {
        "violated"
    };
    r.row(vec![
        "convex_sampled".into(),
        convex.into(),
        c.convexity_margin.into(),
        Cell::Missing,
        Cell::Missing,
    ]);
    r.row(verdict_row("delta_increasing", &c.delta_incr));
    r.row(verdict_row("property_p_fprime", &c.p_gate));
    r.row(verdict_row("fprime_xi_monotone", &c.fprime_xi_monotone));
    let equivalence = match c.equivalence {
        Some(true) => "agrees",
        Some(false) => "disagrees",
        None => "gate_failed",
    };
    r.row(vec![
        "equivalence".into(),
        equivalence.into(),
        Cell::Missing,
        Cell::Missing,
        pairs.len().into(),
    ]);
    echo(&mut r, "convexity", &args.f, &args.alpha, &args.common);
    r.meta_num("range_lo", args.a);
    r.meta_num("range_hi", args.b);
    r.meta_num("delta", args.delta);
    r.meta("pairs", args.n);
    r.meta("seed", args.seed);
    r.meta("convention", format!("{convention:?}").to_lowercase());
    r.meta_num("bridge_residual", c.bridge_residual);
    Ok(r.into())
}

const MONO_ROWS: usize = 64;

pub fn mono(args: &MonoArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let alpha = single_alpha(&args.alpha)?;
    let p = params(alpha, 0.0, &args.common)?;
    let m = monotonicity_certificate(&f, &p, args.tau, args.b)?;
    let rec = &m.reconstruction;
    let stride = (rec.grid.len() - 1).div_ceil(MONO_ROWS).max(1);
    let mut r = Report::new(&["x", "delta_f", "reconstructed", "error"]);
    let last = rec.grid.len() - 1;
    for i in (0..=last)
        .step_by(stride)
        .chain((last % stride != 0).then_some(last))
    {
        r.row(vec![
            rec.grid[i].into(),
            rec.direct[i].into(),
            rec.reconstructed[i].into(),
            (rec.direct[i] - rec.reconstructed[i]).abs().into(),
        ]);
    }
    echo(&mut r, "mono", &args.f, &args.alpha, &args.common);
    r.meta_num("tau", args.tau);
    r.meta_num("b", args.b);
    r.meta("verdict", outcome_name(&m.verdict.outcome));
    r.meta_num("delta_f0", m.delta_f0);
    r.meta_num("min_delta_derivative", m.min_delta_derivative);
    r.meta_num("min_delta_f", m.min_delta_f);
    r.meta_num("reconstruction_max_error", rec.max_error);
    r.meta_num("literal_kernel_residual", m.literal_formula_residual);
    Ok(r.into())
}

pub fn periodic(args: &PeriodicArgs) -> Result<Output, CliError> {
    let f = parse_f(&args.f)?;
    let alpha = single_alpha(&args.alpha)?;
    if args.scan_n < 1 || !(args.b > args.a) {
        return Err(CliError::Usage(
            "periodic needs b > a and --scan-n >= 1".into(),
        ));
    }
    let p = params(alpha, 0.0, &args.common)?;
    let grid = linspace(args.a, args.b, args.scan_n);
    let verdict = periodicity_defect(&f, &p, args.tau, &grid)?;
    let d = DerivativeFn::new(&f, 0.0, alpha, args.common.grid_n)?;
    let mut r = Report::new(&["t", "derivative", "shifted_derivative", "defect"]);
    for &t in &grid {
        let (here, there) = (d.value(t)?, d.value(t + args.tau)?);
        r.row(vec![
            t.into(),
            here.into(),
            there.into(),
            (there - here).abs().into(),
        ]);
    }
    echo(&mut r, "periodic", &args.f, &args.alpha, &args.common);
    r.meta_num("tau", args.tau);
    r.meta("defect", outcome_name(&verdict.outcome));
    Ok(r.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_specs() {
        assert_eq!(parse_alpha("0.5").unwrap(), vec![0.5]);
        let sweep = parse_alpha("0:1:5").unwrap();
        assert_eq!(sweep.len(), 5);
        assert_eq!(sweep[0], 0.01);
        assert_eq!(sweep[4], 0.99);
        assert!((sweep[2] - 0.5).abs() < 1e-15);
        for bad in ["", "a", "0.1:0.2", "0.1:0.2:x", "0.1:0.2:0", "1:2:3:4"] {
            assert!(matches!(parse_alpha(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn single_order_commands_reject_sweeps() {
        assert!(single_alpha("0.1:0.9:3").is_err());
        assert_eq!(single_alpha("0.1:0.9:1").unwrap(), 0.1);
    }
}
