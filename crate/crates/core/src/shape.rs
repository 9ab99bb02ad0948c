//! Order and shape analysis with windowed fractional derivatives:
//! δ-increasing checks, property (P), the convexity equivalence, the
//! monotonicity certificate, comparison and periodicity measurements.
//!
//! All verdicts are sampled evidence over finitely many windows or grid
//! points, never proofs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{FracError, Result};
use crate::fracops::{
    rl_derivative_any_base, windowed_derivative_with, Backend, DerivativeFn, FractionalParams,
    WindowConvention, WindowSpec,
};
use crate::function::{Derivative, ScalarFn, Shifted};
use crate::meanval::mean_value;
use crate::quad;
use crate::roots::{self, linspace};
use crate::scalar::Real;
use crate::special::gamma_positive;

/// Two equal-length windows `[x0, x0+δ]` and `[y0, y0+δ]` with `x0 + δ < y0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPairSample<T> {
    pub x0: T,
    pub y0: T,
    pub delta: T,
}

impl<T: Real> WindowPairSample<T> {
    pub fn new(x0: T, y0: T, delta: T) -> Result<Self> {
        if !(delta > T::zero()) || !(x0 + delta < y0) {
            return Err(FracError::InvalidParameter(format!(
                "window pair needs delta > 0 and x0 + delta < y0, got x0 = {x0}, y0 = {y0}, delta = {delta}"
            )));
        }
        Ok(Self { x0, y0, delta })
    }
}

/// Default number of sampled window pairs.
pub const DEFAULT_PAIRS: usize = 32;

/// Latin-hypercube sample of admissible window pairs inside `[lo, hi]`.
///
/// `x0` is stratified over `[lo, hi − 2δ)` and the gap `y0 − (x0 + δ)` over
/// the remaining room, so every pair satisfies `x0 + δ < y0 ≤ hi − δ`. The
/// same seed always yields the same pairs.
pub fn sample_pairs<T: Real>(
    lo: T,
    hi: T,
    delta: T,
    count: usize,
    seed: u64,
) -> Result<Vec<WindowPairSample<T>>> {
    let room = hi - lo - delta - delta;
    if !(delta > T::zero()) || !(room > T::zero()) || count == 0 {
        return Err(FracError::InvalidParameter(format!(
            "no admissible window pairs of length {delta} in [{lo}, {hi}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strata = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut cells: Vec<usize> = (0..count).collect();
        cells.shuffle(rng);
        cells
            .into_iter()
            .map(|c| (c as f64 + rng.gen::<f64>()) / count as f64)
            .collect()
    };
    let us = strata(&mut rng);
    let vs = strata(&mut rng);
    us.into_iter()
        .zip(vs)
        .map(|(u, v)| {
            let x0 = lo + T::lit(u) * room;
            let gap = (hi - delta) - (x0 + delta);
            // 1 − v ∈ (0, 1] keeps y0 strictly right of x0 + δ.
            let y0 = x0 + delta + T::lit(1.0 - v) * gap;
            WindowPairSample::new(x0, y0, delta)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeProperty {
    DeltaIncreasing,
    PropertyP,
    ConvexityEquiv,
    FprimeXiMonotone,
    MonotoneUpToTau,
    Comparison,
    PeriodicDefect,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    Holds,
    Violated,
    /// The hypotheses of the statement are not met on the sample.
    NotApplicable(String),
    /// Some samples could not be evaluated.
    Inconclusive(String),
    /// A measurement with no pass/fail meaning.
    Measured(T),
}

/// One sample that violates (or, for gates, fails) a property.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<T> {
    /// Window start `x0`, or the grid point for pointwise checks.
    pub at: T,
    /// Window start `y0`; equals `at` for pointwise checks.
    pub other: T,
    /// Amount by which the inequality fails (positive).
    pub margin: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVerdict<T> {
    pub property: ShapeProperty,
    pub outcome: Outcome<T>,
    /// Non-empty whenever the outcome is `Violated` or `NotApplicable`.
    pub witnesses: Vec<Witness<T>>,
    /// Largest signed margin over all samples (≤ 0 means comfortably satisfied).
    pub worst_margin: T,
    pub samples: usize,
}

impl<T: Real> ShapeVerdict<T> {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    fn from_margins(property: ShapeProperty, margins: &[(T, T, T, T)]) -> Self {
        // (at, other, margin, tolerance)
        let witnesses: Vec<Witness<T>> = margins
            .iter()
            .filter(|m| m.2 > m.3)
            .map(|&(at, other, margin, _)| Witness { at, other, margin })
            .collect();
        let worst_margin = margins.iter().fold(T::neg_infinity(), |w, m| w.max(m.2));
        Self {
            property,
            outcome: if witnesses.is_empty() {
                Outcome::Holds
            } else {
                Outcome::Violated
            },
            witnesses,
            worst_margin,
            samples: margins.len(),
        }
    }
}

/// The function and interval a window convention assigns to window start `x0`.
fn window_fn<T: Real, F: ScalarFn<T> + ?Sized>(
    f: &F,
    x0: T,
    convention: WindowConvention,
) -> Shifted<&F, T> {
    let shift = match convention {
        WindowConvention::Absolute => T::zero(),
        WindowConvention::Anchored => -x0,
    };
    Shifted { inner: f, shift }
}

fn windowed<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x0: T,
    delta: T,
    convention: WindowConvention,
) -> Result<crate::OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let w = WindowSpec::new(x0, delta)?.with_convention(convention);
    windowed_derivative_with(f, &w, p)
}

/// δ-increasing: windowed derivative at `x0` ≤ windowed derivative at `y0`
/// for every sampled pair, up to the combined quadrature error.
pub fn delta_increasing_check<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    pairs: &[WindowPairSample<T>],
    convention: WindowConvention,
) -> Result<ShapeVerdict<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let margins: Vec<(T, T, T, T)> = pairs
        .par_iter()
        .map(|s| {
            let dx = windowed(f, p, s.x0, s.delta, convention)?;
            let dy = windowed(f, p, s.y0, s.delta, convention)?;
            let tol = dx.est_error
                + dy.est_error
                + T::roundoff_floor() * (dx.value.abs() + dy.value.abs());
            Ok((s.x0, s.y0, dx.value - dy.value, tol))
        })
        .collect::<Result<_>>()?;
    Ok(ShapeVerdict::from_margins(
        ShapeProperty::DeltaIncreasing,
        &margins,
    ))
}

/// Mean value of a window function, relative to the window start.
#[derive(Debug, Clone, Copy, PartialEq)]
enum WindowMean<T> {
    Offset(T),
    /// Flat window: every point is a mean value.
    Any,
    Missing,
}

const WINDOW_SCAN: usize = 64;

fn window_mean<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x0: T,
    delta: T,
    convention: WindowConvention,
) -> Result<WindowMean<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let mut tol = *p.tolerances();
    tol.allow_nonzero_base = true;
    let q = p.with_base(x0)?.with_tolerances(tol);
    let g = window_fn(f, x0, convention);
    match mean_value(&g, &q, x0 + delta, WINDOW_SCAN) {
        Ok(m) if m.degenerate => Ok(WindowMean::Any),
        Ok(m) => Ok(WindowMean::Offset(
            m.xi_sup.expect("non-degenerate mean value") - x0,
        )),
        Err(FracError::EmptyLambda(_)) => Ok(WindowMean::Missing),
        Err(e) => Err(e),
    }
}

/// Property (P): the mean-value offset `ξ − window start` is the same in
/// both windows of every pair, within `offset_rel·δ`.
pub fn property_p_check<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    pairs: &[WindowPairSample<T>],
    convention: WindowConvention,
) -> Result<ShapeVerdict<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let results: Vec<Option<(T, T, T, T)>> = pairs
        .par_iter()
        .map(|s| {
            let mx = window_mean(f, p, s.x0, s.delta, convention)?;
            let my = window_mean(f, p, s.y0, s.delta, convention)?;
            let tol = p.tolerances().offset_rel * s.delta;
            Ok(match (mx, my) {
                (WindowMean::Offset(a), WindowMean::Offset(b)) => {
                    Some((s.x0, s.y0, (a - b).abs(), tol))
                }
                (WindowMean::Any, WindowMean::Any) => Some((s.x0, s.y0, T::zero(), tol)),
                _ => None,
            })
        })
        .collect::<Result<_>>()?;
    let margins: Vec<(T, T, T, T)> = results.iter().flatten().copied().collect();
    let missing = results.len() - margins.len();
    let mut verdict = ShapeVerdict::from_margins(ShapeProperty::PropertyP, &margins);
    verdict.samples = results.len();
    if verdict.holds() && missing > 0 {
        verdict.outcome = Outcome::Inconclusive(format!(
            "{missing} of {} pairs have no comparable mean value",
            results.len()
        ));
    }
    Ok(verdict)
}

/// Evidence for the equivalence "f convex ⟺ f δ-increasing".
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport<T> {
    /// Midpoint convexity on a uniform sample of the covered range.
    pub convex_sampled: bool,
    /// Largest `f((u+v)/2) − (f(u)+f(v))/2` seen (≤ 0 for convex samples).
    pub convexity_margin: T,
    pub delta_incr: ShapeVerdict<T>,
    /// Property (P) for f′, the hypothesis of the equivalence.
    pub p_gate: ShapeVerdict<T>,
    /// f′(ξ_x) ≤ f′(ξ_y) over the pairs, with ξ the mean values of f′.
    pub fprime_xi_monotone: ShapeVerdict<T>,
    /// max over pairs of |(D_x − D_y) − (f′(ξ_x) − f′(ξ_y))·δ^{1−α}/Γ(2−α)|.
    pub bridge_residual: T,
    /// `convex_sampled == delta_incr.holds()` when the gate passes, else `None`.
    pub equivalence: Option<bool>,
}

const CONVEXITY_GRID: usize = 32;

/// Checks the three faces of the convexity equivalence on the sampled pairs.
pub fn convexity_equivalence<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    pairs: &[WindowPairSample<T>],
    convention: WindowConvention,
) -> Result<ConvexityReport<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if pairs.is_empty() {
        return Err(FracError::InvalidParameter(
            "convexity check needs at least one window pair".into(),
        ));
    }
    let fprime = Derivative(f);
    let p_gate = property_p_check(&fprime, p, pairs, convention)?;
    let delta_incr = delta_increasing_check(f, p, pairs, convention)?;

    let lo = pairs.iter().fold(T::infinity(), |m, s| m.min(s.x0));
    let hi = pairs
        .iter()
        .fold(T::neg_infinity(), |m, s| m.max(s.y0 + s.delta));
    let nodes = linspace(lo, hi, CONVEXITY_GRID);
    let values = roots::sample(&|t| f.value(t), &nodes)?;
    let mut convexity_margin = T::neg_infinity();
    let mut convex_sampled = true;
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let mid = f.value((nodes[i] + nodes[j]) * T::lit(0.5))?;
            let chord = (values[i] + values[j]) * T::lit(0.5);
            let margin = mid - chord;
            let tol = T::roundoff_floor() * (mid.abs() + chord.abs() + T::one());
            convexity_margin = convexity_margin.max(margin);
            if margin > tol {
                convex_sampled = false;
            }
        }
    }

    // The bridge compares windowed derivatives of f with mean values of f′,
    // both on the oracle so the identity is tested, not the quadrature.
    let oracle = p.with_backend(Backend::AdaptiveOracle);
    let alpha = p.alpha();
    let bridge: Vec<(T, T, T, T, T)> = pairs
        .par_iter()
        .map(|s| {
            let slope_at = |x0: T| -> Result<T> {
                let g = window_fn(&fprime, x0, convention);
                match window_mean(&fprime, p, x0, s.delta, convention)? {
                    WindowMean::Offset(off) => g.value(x0 + off),
                    WindowMean::Any => g.value(x0),
                    WindowMean::Missing => Err(FracError::EmptyLambda(format!(
                        "f' has no mean value on the window starting at {x0}"
                    ))),
                }
            };
            let (sx, sy) = (slope_at(s.x0)?, slope_at(s.y0)?);
            let dx = windowed(f, &oracle, s.x0, s.delta, convention)?.value;
            let dy = windowed(f, &oracle, s.y0, s.delta, convention)?.value;
            let scale = s.delta.powf(T::one() - alpha) / gamma_positive(T::lit(2.0) - alpha);
            let residual = ((dx - dy) - (sx - sy) * scale).abs();
            let tol = T::roundoff_floor() * (sx.abs() + sy.abs());
            Ok((s.x0, s.y0, sx - sy, tol, residual))
        })
        .collect::<Result<_>>()?;
    let bridge_residual = bridge.iter().fold(T::zero(), |m, b| m.max(b.4));
    let slope_margins: Vec<(T, T, T, T)> = bridge.iter().map(|b| (b.0, b.1, b.2, b.3)).collect();
    let fprime_xi_monotone =
        ShapeVerdict::from_margins(ShapeProperty::FprimeXiMonotone, &slope_margins);

    let equivalence = p_gate.holds().then(|| convex_sampled == delta_incr.holds());
    Ok(ConvexityReport {
        convex_sampled,
        convexity_margin,
        delta_incr,
        p_gate,
        fprime_xi_monotone,
        bridge_residual,
        equivalence,
    })
}

/// Δf(x) = f(x+τ) − f(x) on `[0, b − τ]` against its reconstruction
/// `Δf(0) + I^α_{0+}[ D_C^α Δf ](x)`, where the Caputo derivative of Δf is
/// `I^{1−α}` of `f′(·+τ) − f′`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<T> {
    pub grid: Vec<T>,
    pub direct: Vec<T>,
    pub reconstructed: Vec<T>,
    pub max_error: T,
}

/// Builds the reconstruction with two Toeplitz product-trapezoid
/// convolutions on `grid_n` uniform panels.
///
/// The Caputo derivative of Δf starts like `φ(0)x^{1−α}/Γ(2−α)`, which a
/// piecewise-linear interpolant cannot follow on the first panel. That term
/// is integrated in closed form (its `I^α` is `φ(0)x`), so the convolutions
/// only see `φ − φ(0)`.
pub fn reconstruct_difference<T, F>(
    f: &F,
    alpha: T,
    tau: T,
    b: T,
    grid_n: usize,
) -> Result<Reconstruction<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    FractionalParams::new(alpha, T::zero(), grid_n)?;
    if !(tau > T::zero() && tau < b) {
        return Err(FracError::InvalidParameter(format!(
            "need 0 < tau < b, got tau = {tau}, b = {b}"
        )));
    }
    let span = b - tau;
    let h = span / T::from_count(grid_n);
    let grid = linspace(T::zero(), span, grid_n);
    let direct = roots::sample(&|x| Ok(f.value(x + tau)? - f.value(x)?), &grid)?;
    let phi = roots::sample(&|x| Ok(f.derivative(x + tau)? - f.derivative(x)?), &grid)?;
    let phi0 = phi[0];
    let centred: Vec<T> = phi.iter().map(|&v| v - phi0).collect();
    let inner_scale = gamma_positive(T::one() - alpha).recip();
    let psi: Vec<T> = quad::uniform_convolution(&centred, -alpha, h)
        .into_iter()
        .map(|v| v * inner_scale)
        .collect();
    let outer_scale = gamma_positive(alpha).recip();
    let reconstructed: Vec<T> = quad::uniform_convolution(&psi, alpha - T::one(), h)
        .into_iter()
        .zip(&grid)
        .map(|(v, &x)| direct[0] + phi0 * x + v * outer_scale)
        .collect();
    let max_error = direct
        .iter()
        .zip(&reconstructed)
        .fold(T::zero(), |m, (d, r)| m.max((*d - *r).abs()));
    Ok(Reconstruction {
        grid,
        direct,
        reconstructed,
        max_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport<T> {
    /// Conclusion Δf ≥ 0, or `NotApplicable` when a hypothesis fails.
    pub verdict: ShapeVerdict<T>,
    /// Δf(0) = f(τ) − f(0).
    pub delta_f0: T,
    /// min over the hypothesis grid of D^α f(x+τ) − D^α f(x).
    pub min_delta_derivative: T,
    pub min_delta_f: T,
    pub reconstruction: Reconstruction<T>,
    /// max |x^{α−1}Δf(0)/Γ(α) + I^α[ΔD^α f](x) − Δf(x)| over x > 0 on the
    /// coarse hypothesis grid: the literal kernel form of the identity.
    pub literal_formula_residual: T,
}

const HYPOTHESIS_POINTS: usize = 64;

/// Certificate for "Δf(0) ≥ 0 and ΔD^α f ≥ 0 imply Δf ≥ 0" on `[0, b − τ]`,
/// with the difference reconstructed from its fractional derivative.
pub fn monotonicity_certificate<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    tau: T,
    b: T,
) -> Result<MonotonicityReport<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let alpha = p.alpha();
    let reconstruction = reconstruct_difference(f, alpha, tau, b, p.grid_n())?;
    let delta_f0 = reconstruction.direct[0];
    let span = b - tau;

    let d = DerivativeFn::new(f, T::zero(), alpha, p.grid_n())?;
    let coarse = linspace(T::zero(), span, HYPOTHESIS_POINTS);
    let f0 = f.value(T::zero())?;
    let delta_d = roots::sample(
        &|x: T| {
            let at_x = if x == T::zero() && f0 == T::zero() {
                T::zero()
            } else {
                d.value(x)?
            };
            Ok(d.value(x + tau)? - at_x)
        },
        &coarse[if f0 == T::zero() { 0 } else { 1 }..],
    )?;
    let min_delta_derivative = delta_d.iter().fold(T::infinity(), |m, &v| m.min(v));

    let literal_formula_residual = if f0 == T::zero() {
        let h = span / T::from_count(HYPOTHESIS_POINTS);
        let conv = quad::uniform_convolution(&delta_d, alpha - T::one(), h);
        let scale = gamma_positive(alpha).recip();
        (1..coarse.len()).try_fold(T::zero(), |m, k| -> Result<T> {
            let x = coarse[k];
            let literal = x.powf(alpha - T::one()) * delta_f0 * scale + conv[k] * scale;
            Ok(m.max((literal - (f.value(x + tau)? - f.value(x)?)).abs()))
        })?
    } else {
        T::nan()
    };

    let min_delta_f = reconstruction
        .direct
        .iter()
        .fold(T::infinity(), |m, &v| m.min(v));
    let tol = T::lit(1e-12);
    let verdict = if delta_f0 < -tol {
        ShapeVerdict {
            property: ShapeProperty::MonotoneUpToTau,
            outcome: Outcome::NotApplicable(format!("f(tau) - f(0) = {delta_f0:e} < 0")),
            witnesses: vec![Witness {
                at: T::zero(),
                other: tau,
                margin: -delta_f0,
            }],
            worst_margin: -delta_f0,
            samples: 1,
        }
    } else if min_delta_derivative < -tol {
        let offset = if f0 == T::zero() { 0 } else { 1 };
        let witnesses = delta_d
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < -tol)
            .map(|(k, &v)| {
                let x = coarse[k + offset];
                Witness {
                    at: x,
                    other: x + tau,
                    margin: -v,
                }
            })
            .collect();
        ShapeVerdict {
            property: ShapeProperty::MonotoneUpToTau,
            outcome: Outcome::NotApplicable(format!(
                "fractional derivative difference reaches {min_delta_derivative:e} < 0"
            )),
            witnesses,
            worst_margin: -min_delta_derivative,
            samples: delta_d.len(),
        }
    } else {
        let margins: Vec<(T, T, T, T)> = reconstruction
            .grid
            .iter()
            .zip(&reconstruction.direct)
            .map(|(&x, &v)| (x, x + tau, -v, tol))
            .collect();
        ShapeVerdict::from_margins(ShapeProperty::MonotoneUpToTau, &margins)
    };
    Ok(MonotonicityReport {
        verdict,
        delta_f0,
        min_delta_derivative,
        min_delta_f,
        reconstruction,
        literal_formula_residual,
    })
}

const COMPARISON_POINTS: usize = 64;

/// "D^α f ≤ D^α g and f(0) = g(0) imply f ≤ g" on `(0, b]`. A failed
/// hypothesis gives `NotApplicable` with the offending points as witnesses.
pub fn comparison_check<T, F, G>(
    f: &F,
    g: &G,
    p: &FractionalParams<T>,
    b: T,
) -> Result<ShapeVerdict<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
    G: ScalarFn<T> + ?Sized,
{
    let (f0, g0) = (f.value(T::zero())?, g.value(T::zero())?);
    if (f0 - g0).abs() > T::lit(1e-12) {
        return Err(FracError::Hypothesis(format!(
            "comparison needs f(0) = g(0), found {f0} and {g0}"
        )));
    }
    if !(b > T::zero()) {
        return Err(FracError::InvalidParameter(format!("need b > 0, got {b}")));
    }
    let q = p.with_base(T::zero())?;
    let grid = linspace(T::zero(), b, COMPARISON_POINTS);
    let grid = &grid[1..];
    let hypothesis: Vec<(T, T, T, T)> = grid
        .par_iter()
        .map(|&x| {
            let df = rl_derivative_any_base(f, &q, x)?;
            let dg = rl_derivative_any_base(g, &q, x)?;
            let tol = df.est_error
                + dg.est_error
                + T::roundoff_floor() * (df.value.abs() + dg.value.abs());
            Ok((x, x, df.value - dg.value, tol))
        })
        .collect::<Result<_>>()?;
    let gate = ShapeVerdict::from_margins(ShapeProperty::Comparison, &hypothesis);
    if !gate.holds() {
        return Ok(ShapeVerdict {
            outcome: Outcome::NotApplicable(format!(
                "D^alpha f <= D^alpha g fails at {} of {} points",
                gate.witnesses.len(),
                gate.samples
            )),
            ..gate
        });
    }
    let conclusion: Vec<(T, T, T, T)> = grid
        .iter()
        .map(|&x| {
            let (fx, gx) = (f.value(x)?, g.value(x)?);
            Ok((
                x,
                x,
                fx - gx,
                T::roundoff_floor() * (fx.abs() + gx.abs() + T::one()),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ShapeVerdict::from_margins(
        ShapeProperty::Comparison,
        &conclusion,
    ))
}

const PERIODICITY_PROBES: usize = 1024;

/// Measures max over `t_grid` of |D^α_{0+} f(t+τ) − D^α_{0+} f(t)| for
/// τ-periodic `f`. The result is a measurement, not a verdict.
pub fn periodicity_defect<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    tau: T,
    t_grid: &[T],
) -> Result<ShapeVerdict<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if !(tau > T::zero()) || t_grid.is_empty() {
        return Err(FracError::InvalidParameter(
            "periodicity needs tau > 0 and a non-empty grid".into(),
        ));
    }
    let lo = t_grid.iter().fold(T::infinity(), |m, &t| m.min(t));
    let hi = t_grid.iter().fold(T::neg_infinity(), |m, &t| m.max(t));
    let mut probes = linspace(lo, hi, PERIODICITY_PROBES);
    probes.extend_from_slice(t_grid);
    let gap = roots::sample(&|t| Ok((f.value(t + tau)? - f.value(t)?).abs()), &probes)?
        .into_iter()
        .fold(T::zero(), T::max);
    if gap > T::lit(1e-10) {
        return Err(FracError::Hypothesis(format!(
            "f is not {tau}-periodic on the grid range: max |f(t + tau) - f(t)| = {gap:e}"
        )));
    }
    let d = DerivativeFn::new(f, T::zero(), p.alpha(), p.grid_n())?;
    let defects = roots::sample(&|t: T| Ok((d.value(t + tau)? - d.value(t)?).abs()), t_grid)?;
    let (argmax, defect) =
        defects.iter().enumerate().fold(
            (0, T::zero()),
            |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
        );
    Ok(ShapeVerdict {
        property: ShapeProperty::PeriodicDefect,
        outcome: Outcome::Measured(defect),
        witnesses: vec![Witness {
            at: t_grid[argmax],
            other: t_grid[argmax] + tau,
            margin: defect,
        }],
        worst_margin: defect,
        samples: t_grid.len(),
    })
}
