//! Fractional critical points: roots of `x ↦ D^α_{a+} f(x)`.

use rayon::prelude::*;

use crate::error::{FracError, Result};
use crate::fracops::{rl_derivative, Backend, DerivativeFn, DerivativeMethod, FractionalParams};
use crate::function::ScalarFn;
use crate::meanval::{mean_value, require_strictly_monotone};
use crate::roots::{self, linspace, Root};
use crate::scalar::Real;
use crate::special::gamma_positive;

/// Clips a sweep order into `[0.01, 0.99]`.
pub fn clip_alpha<T: Real>(alpha: T) -> T {
    alpha.max(T::lit(0.01)).min(T::lit(0.99))
}

/// `count` equally spaced orders from `start` to `stop` inclusive, clipped.
pub fn alpha_grid<T: Real>(start: T, stop: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![clip_alpha(start)],
        _ => linspace(start, stop, count - 1)
            .into_iter()
            .map(clip_alpha)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointReport<T> {
    pub alpha: T,
    pub a: T,
    pub b: T,
    /// Ascending, each in (a, b]; `residual` is |D^α f| at the root.
    pub roots: Vec<Root<T>>,
    pub method_grid_n: usize,
    /// max |D^α f| over the scan.
    pub scan_sup: T,
}

impl<T: Real> CriticalPointReport<T> {
    /// Largest root inside `[center − radius, center + radius]`.
    pub fn largest_in_ball(&self, center: T, radius: T) -> Option<T> {
        self.roots
            .iter()
            .filter(|r| (r.x - center).abs() <= radius)
            .map(|r| r.x)
            .last()
    }

    pub fn largest(&self) -> Option<T> {
        self.roots.last().map(|r| r.x)
    }
}

/// Scans `D^α_{a+} f` on `scan_n` uniform points of `(a, b]` and bisects
/// every sign change to `bracket_rel·(b − a)`.
pub fn critical_points<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    b: T,
    scan_n: usize,
) -> Result<CriticalPointReport<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let a = p.a();
    if !(b > a) || scan_n < 2 {
        return Err(FracError::InvalidParameter(format!(
            "need b > a and scan_n >= 2, got a = {a}, b = {b}, scan_n = {scan_n}"
        )));
    }
    p.check_base(f)?;
    let d = DerivativeFn::new(f, a, p.alpha(), p.grid_n())?;
    let h = |x: T| d.value(x);
    let nodes = linspace(a, b, scan_n);
    let nodes = &nodes[1..];
    let values = roots::sample(&h, nodes)?;
    let scan_sup = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let width = p.tolerances().bracket_rel * (b - a);
    let mut found = roots::roots_from_scan(&h, nodes, &values, width)?;
    found.sort_by(|l, r| l.x.partial_cmp(&r.x).expect("roots are finite"));
    Ok(CriticalPointReport {
        alpha: p.alpha(),
        a,
        b,
        roots: found,
        method_grid_n: p.grid_n(),
        scan_sup,
    })
}

/// Outcome of the Lemma-style equivalence test at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma31Check<T> {
    pub x: T,
    /// Mean value of order α: f(ξ)(x−a)^α/Γ(1+α) = I^α_{a+} f(x).
    pub xi: T,
    /// |f(ξ) − (x − a)^α|.
    pub lhs_residual: T,
    /// D^{1−α}_{a+} f(x).
    pub rhs_value: T,
    pub tolerance: T,
}

impl<T: Real> Lemma31Check<T> {
    pub fn lhs_zero(&self) -> bool {
        self.lhs_residual <= self.tolerance
    }

    pub fn rhs_zero(&self) -> bool {
        self.rhs_value.abs() <= self.tolerance
    }

    /// Both sides vanish or neither does.
    pub fn predicate_holds(&self) -> bool {
        self.lhs_zero() == self.rhs_zero()
    }
}

/// Compares `f(ξ(x)) = (x − a)^α` against `D^{1−α}_{a+} f(x) = 0` at `x`,
/// where α is the order stored in `p`.
pub fn lemma31_check<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x: T,
    scan_n: usize,
) -> Result<Lemma31Check<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let a = p.a();
    require_strictly_monotone(f, a, x)?;
    let dual = p.with_alpha(T::one() - p.alpha())?;
    let mv = mean_value(f, &dual, x, scan_n)?;
    let xi = mv
        .xi_sup
        .ok_or_else(|| FracError::Solver(format!("degenerate mean value at x = {x}")))?;
    let rhs = rl_derivative(f, &dual, x, DerivativeMethod::CaputoForm)?;
    Ok(Lemma31Check {
        x,
        xi,
        lhs_residual: (f.value(xi)? - (x - a).powf(p.alpha())).abs(),
        rhs_value: rhs.value,
        tolerance: p.tolerances().identity_zero,
    })
}

/// A point ξ ∈ (a, x_zero] where `D^α_{a+} f` vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalZero<T> {
    pub xi: T,
    /// |D^α_{a+} f(ξ)|.
    pub residual: T,
    /// The mean-value level Γ(1+α)·f(x_zero)·(x_zero − a)^{−α}.
    pub level: T,
    /// D^α f vanished on the whole scan; `xi` is the first scan point.
    pub degenerate: bool,
}

/// Realizes the existence of a fractional critical point before a zero of f.
///
/// Applies the mean-value construction to `D^α f`: with f(a) = 0,
/// `I^α D^α f = f`, so some ξ ∈ (a, x_zero] has `D^α f(ξ)` equal to the level
/// Γ(1+α) f(x_zero) (x_zero − a)^{−α}, which is zero up to rounding. The
/// largest such ξ is returned.
pub fn theorem32_xi<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x_zero: T,
    scan_n: usize,
) -> Result<FractionalZero<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let a = p.a();
    if !(x_zero > a) || scan_n < 2 {
        return Err(FracError::InvalidParameter(format!(
            "need x_zero > a and scan_n >= 2, got x_zero = {x_zero}, a = {a}"
        )));
    }
    let f_zero = f.value(x_zero)?;
    if f_zero.abs() > T::lit(1e-10) {
        return Err(FracError::Hypothesis(format!(
            "f(x_zero) must vanish, found f({x_zero}) = {f_zero:e}"
        )));
    }
    p.check_base(f)?;
    let alpha = p.alpha();
    let level = gamma_positive(T::one() + alpha) * f_zero * (x_zero - a).powf(-alpha);
    let d = DerivativeFn::new(f, a, alpha, p.grid_n())?;
    let h = |x: T| Ok(d.value(x)? - level);
    let nodes = linspace(a, x_zero, scan_n);
    let nodes = &nodes[1..];
    let values = roots::sample(&h, nodes)?;
    let sup = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if sup <= p.tolerances().root_rel {
        return Ok(FractionalZero {
            xi: nodes[0],
            residual: sup,
            level,
            degenerate: true,
        });
    }
    let width = p.tolerances().bracket_rel * (x_zero - a);
    let found = roots::roots_from_scan(&h, nodes, &values, width)?;
    let best = found
        .into_iter()
        .max_by(|l, r| l.x.partial_cmp(&r.x).expect("roots are finite"))
        .ok_or_else(|| {
            FracError::Solver(format!(
                "no sign change of the fractional derivative on ({a}, {x_zero}] at scan resolution {scan_n}"
            ))
        })?;
    // The scan locates ξ only to the product rule's discretization error;
    // the root is refined on the adaptive oracle inside a widened bracket.
    let oracle = (*p).with_backend(p.backend_or(Backend::AdaptiveOracle));
    let g = |x: T| Ok(rl_derivative(f, &oracle, x, DerivativeMethod::CaputoForm)?.value - level);
    let xi = polish(&g, best.x, a, x_zero, width)?.unwrap_or(best.x);
    Ok(FractionalZero {
        xi,
        residual: (g(xi)? + level).abs(),
        level,
        degenerate: false,
    })
}

/// Bisects `g` on the smallest bracket `[x ± w]`, `w` growing geometrically
/// from `1e-6·(hi − lo)`, that shows a sign change inside `(lo, hi]`.
fn polish<T, G>(g: &G, x: T, lo: T, hi: T, width: T) -> Result<Option<T>>
where
    T: Real,
    G: Fn(T) -> Result<T>,
{
    let mut w = T::lit(1e-6) * (hi - lo);
    for _ in 0..8 {
        let l = (x - w).max(lo + T::lit(1e-3) * (x - lo));
        let r = (x + w).min(hi);
        let (gl, gr) = (g(l)?, g(r)?);
        if gl == T::zero() || gr == T::zero() || gl.signum() != gr.signum() {
            return Ok(Some(roots::bisect(g, l, r, gl, gr, width)?.x));
        }
        w = w * T::lit(8.0);
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RAlphaSample<T> {
    pub alpha: T,
    /// Largest critical point in the ball around the extremum, if any.
    pub r_alpha: Option<T>,
    /// Largest critical point anywhere in (a, b].
    pub global_largest: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RAlphaCurve<T> {
    pub center_x0: T,
    pub radius_eps: T,
    /// Ascending in α.
    pub samples: Vec<RAlphaSample<T>>,
    /// The unique root x1 of f in (a, b].
    pub x1_root: T,
    /// The unique interior extremum of f located by sampling.
    pub x0_max: T,
    /// |global largest at the smallest α − x1|.
    pub gap_small_alpha: Option<T>,
    /// |r(α) at the largest α − x0|.
    pub gap_large_alpha: Option<T>,
    /// The global largest critical point is non-increasing in α.
    pub monotone: bool,
}

const HYPOTHESIS_SCAN: usize = 2048;

/// Traces r(α) for `f` with a unique interior extremum near `x0` and a
/// unique root in (a, b].
#[allow(clippy::too_many_arguments)]
pub fn r_alpha_curve<T, F>(
    f: &F,
    a: T,
    b: T,
    x0: T,
    eps: T,
    alphas: &[T],
    grid_n: usize,
    scan_n: usize,
) -> Result<RAlphaCurve<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if !(b > a) || !(eps > T::zero()) {
        return Err(FracError::InvalidParameter(format!(
            "need b > a and eps > 0, got a = {a}, b = {b}, eps = {eps}"
        )));
    }
    let nodes = linspace(a, b, HYPOTHESIS_SCAN);
    let width = T::lit(1e-13) * (b - a);
    let value = |t: T| f.value(t);
    let f_vals = roots::sample(&value, &nodes[1..])?;
    let f_roots = roots::roots_from_scan(&value, &nodes[1..], &f_vals, width)?;
    if f_roots.len() != 1 {
        return Err(FracError::Hypothesis(format!(
            "expected a unique root of f in (a, b], found {}",
            f_roots.len()
        )));
    }
    let slope = |t: T| f.derivative(t);
    let interior = &nodes[1..nodes.len() - 1];
    let d_vals = roots::sample(&slope, interior)?;
    let extrema = roots::roots_from_scan(&slope, interior, &d_vals, width)?;
    if extrema.len() != 1 {
        return Err(FracError::Hypothesis(format!(
            "expected a unique interior extremum of f, found {}",
            extrema.len()
        )));
    }
    let (x1_root, x0_max) = (f_roots[0].x, extrema[0].x);
    if (x0_max - x0).abs() > eps {
        return Err(FracError::Hypothesis(format!(
            "the extremum of f sits at {x0_max}, outside the ball of radius {eps} around {x0}"
        )));
    }

    let mut alphas: Vec<T> = alphas.iter().copied().map(clip_alpha).collect();
    alphas.sort_by(|l, r| l.partial_cmp(r).expect("orders are finite"));
    let samples: Vec<RAlphaSample<T>> = alphas
        .par_iter()
        .map(|&alpha| {
            let p = FractionalParams::new(alpha, a, grid_n)?;
            let report = critical_points(f, &p, b, scan_n)?;
            Ok(RAlphaSample {
                alpha,
                r_alpha: report.largest_in_ball(x0, eps),
                global_largest: report.largest(),
            })
        })
        .collect::<Result<_>>()?;

    let gap_small_alpha = samples
        .first()
        .and_then(|s| s.global_largest)
        .map(|r| (r - x1_root).abs());
    let gap_large_alpha = samples
        .last()
        .and_then(|s| s.r_alpha)
        .map(|r| (r - x0).abs());
    let largest: Vec<T> = samples.iter().filter_map(|s| s.global_largest).collect();
    let monotone = largest.windows(2).all(|w| w[1] <= w[0]);
    Ok(RAlphaCurve {
        center_x0: x0,
        radius_eps: eps,
        samples,
        x1_root,
        x0_max,
        gap_small_alpha,
        gap_large_alpha,
        monotone,
    })
}

/// Observer-frame velocity `V = D^α v` over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport<T> {
    /// (t, V(t)) for each grid point.
    pub rows: Vec<(T, T)>,
    /// First time in the grid range where v vanishes, if any.
    pub vanishing_at: Option<T>,
    /// The earlier time where V vanishes, when `vanishing_at` is set.
    pub observer_zero: Option<FractionalZero<T>>,
}

/// Tabulates `V(t) = D^α_{a+} v(t)` and, if `v` vanishes at some `t*` in the
/// grid range, the point ξ ≤ t* where V vanishes.
pub fn dilation_scenario<T, F>(
    v: &F,
    p: &FractionalParams<T>,
    t_grid: &[T],
) -> Result<DilationReport<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    p.check_base(v)?;
    let a = p.a();
    let d = DerivativeFn::new(v, a, p.alpha(), p.grid_n())?;
    let mut grid: Vec<T> = t_grid.iter().copied().filter(|&t| t >= a).collect();
    grid.sort_by(|l, r| l.partial_cmp(r).expect("grid is finite"));
    let values = roots::sample(&|t| d.value(t), &grid)?;
    let rows = grid.iter().copied().zip(values).collect();

    let interior: Vec<T> = grid.iter().copied().filter(|&t| t > a).collect();
    let value = |t: T| v.value(t);
    let v_vals = roots::sample(&value, &interior)?;
    let mut vanishing_at = None;
    for k in 0..interior.len() {
        if v_vals[k].abs() <= T::lit(1e-10) {
            vanishing_at = Some(interior[k]);
            break;
        }
        if k + 1 < interior.len()
            && v_vals[k].signum() != v_vals[k + 1].signum()
            && v_vals[k + 1].abs() > T::lit(1e-10)
        {
            let width = T::lit(1e-14) * (interior[k + 1] - a);
            let r = roots::bisect(
                &value,
                interior[k],
                interior[k + 1],
                v_vals[k],
                v_vals[k + 1],
                width,
            )?;
            vanishing_at = Some(r.x);
            break;
        }
    }
    let observer_zero = match vanishing_at {
        Some(t_star) => Some(theorem32_xi(v, p, t_star, 256)?),
        None => None,
    };
    Ok(DilationReport {
        rows,
        vanishing_at,
        observer_zero,
    })
}
