//! Fractional mean values: the level set Λ(α, f, x), its supremum ξ(x, α),
//! the truncated-Taylor polynomial estimator and the implicit-extremum witness.

use rayon::prelude::*;

use crate::error::{FracError, Result};
use crate::expr::Expression;
use crate::fracops::{
    integral_of_order, rl_integral, Backend, DerivativeFn, FractionalParams, OperatorValue,
};
use crate::function::{NthDerivative, ScalarFn};
use crate::roots::{self, linspace, Root};
use crate::scalar::Real;
use crate::special::gamma_positive;

/// The set of fractional mean values of `f` on `[a, x]`.
///
/// Every ξ in `lambda_set` satisfies f(ξ) = g(x) with
/// g(x) = Γ(2−α)·I^{1−α}_{a+}f(x)·(x−a)^{α−1}.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueResult<T> {
    pub x: T,
    pub target_g: T,
    /// I^{1−α}_{a+} f(x).
    pub integral: OperatorValue<T>,
    /// Sorted ascending, strictly inside (a, x).
    pub lambda_set: Vec<Root<T>>,
    /// Largest element of `lambda_set`; `None` when `degenerate`.
    pub xi_sup: Option<T>,
    /// f ≡ g(x) on the whole scan, so every point of (a, x) is a mean value.
    pub degenerate: bool,
}

impl<T: Real> MeanValueResult<T> {
    /// |f(ξ)(x−a)^{1−α}/Γ(2−α) − I^{1−α}f(x)| for a candidate ξ.
    pub fn defining_residual<F: ScalarFn<T> + ?Sized>(
        &self,
        f: &F,
        p: &FractionalParams<T>,
        xi: T,
    ) -> Result<T> {
        let beta = T::one() - p.alpha();
        let lhs = f.value(xi)? * (self.x - p.a()).powf(beta) / gamma_positive(T::one() + beta);
        Ok((lhs - self.integral.value).abs())
    }
}

/// Computes Λ(α, f, x) by scanning `f − g(x)` on `scan_n + 1` uniform points
/// of `[a, x]` and bisecting every sign change.
///
/// The integral uses the adaptive oracle unless `p` names a backend.
pub fn mean_value<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x: T,
    scan_n: usize,
) -> Result<MeanValueResult<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if scan_n < 16 {
        return Err(FracError::InvalidParameter(format!(
            "scan_n must be at least 16, got {scan_n}"
        )));
    }
    p.check_base(f)?;
    let a = p.a();
    let beta = T::one() - p.alpha();
    let q = p.with_backend(p.backend_or(Backend::AdaptiveOracle));
    let integral = rl_integral(f, &q, beta, x)?;
    let target_g = gamma_positive(T::one() + beta) * integral.value * (x - a).powf(-beta);

    let h = |t: T| Ok(f.value(t)? - target_g);
    let nodes = linspace(a, x, scan_n);
    let values = roots::sample(&h, &nodes)?;
    let spread = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let flat_tol = p.tolerances().root_rel * target_g.abs().max(T::one());
    if spread <= flat_tol {
        return Ok(MeanValueResult {
            x,
            target_g,
            integral,
            lambda_set: Vec::new(),
            xi_sup: None,
            degenerate: true,
        });
    }

    let width = p.tolerances().mean_bracket_rel * (x - a);
    let mut lambda_set: Vec<Root<T>> = roots::roots_from_scan(&h, &nodes, &values, width)?
        .into_iter()
        .filter(|r| r.x > a && r.x < x)
        .collect();
    lambda_set.sort_by(|l, r| l.x.partial_cmp(&r.x).expect("roots are finite"));
    let Some(last) = lambda_set.last() else {
        let (lo, hi) = values
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        return Err(FracError::EmptyLambda(format!(
            "f - g(x) keeps one sign on the scan of (a, x) = ({a}, {x}): range [{lo:e}, {hi:e}], g(x) = {target_g}"
        )));
    };
    Ok(MeanValueResult {
        x,
        target_g,
        integral,
        xi_sup: Some(last.x),
        lambda_set,
        degenerate: false,
    })
}

/// Truncated-Taylor estimate of the mean value on `[a, a + δ]`.
///
/// The polynomial in `s = ξ − a` is
/// `Σ_{j=1}^{n} f^{(j)}(a)·{δ^{1−α} s^j/(Γ(2−α) j!) − δ^{j+1−α}/Γ(j+2−α)} − R`
/// with `R = I^{n+2−α}_{a+} f^{(n+1)}(a + δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialEstimate<T> {
    pub a: T,
    pub delta: T,
    pub n: usize,
    /// Coefficient of `s^j` at index `j`; length `n + 1`.
    pub coefficients: Vec<T>,
    pub remainder_term: T,
    /// Roots in `s ∈ (0, δ)`, ascending.
    pub roots_in_range: Vec<Root<T>>,
    /// Bound on the dropped Taylor tail of f(ξ), scaled like the polynomial.
    pub truncation_bound: T,
    /// |R| exceeds every retained series term; the estimate is unreliable.
    pub remainder_dominant: bool,
}

impl<T: Real> PolynomialEstimate<T> {
    pub fn eval(&self, s: T) -> T {
        self.coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * s + c)
    }

    /// `a` plus the largest root, comparable to [`MeanValueResult::xi_sup`].
    pub fn xi_sup(&self) -> Option<T> {
        self.roots_in_range.last().map(|r| self.a + r.x)
    }
}

const POLY_SCAN: usize = 512;

pub fn mean_value_polynomial<T: Real>(
    f: &Expression,
    p: &FractionalParams<T>,
    delta: T,
    n: usize,
) -> Result<PolynomialEstimate<T>> {
    if !(delta > T::zero()) || n == 0 {
        return Err(FracError::InvalidParameter(format!(
            "need delta > 0 and n >= 1, got delta = {delta}, n = {n}"
        )));
    }
    let (a, alpha) = (p.a(), p.alpha());
    let jet = f.derivatives(a, n)?;
    let lead = delta.powf(T::one() - alpha) / gamma_positive(T::lit(2.0) - alpha);

    let mut coefficients = vec![T::zero(); n + 1];
    let mut largest_term = T::zero();
    for j in 1..=n {
        let fj = jet.derivative(j);
        coefficients[j] = jet.coefficients()[j] * lead;
        let jf = T::from_count(j);
        let term =
            fj * delta.powf(jf + T::one() - alpha) / gamma_positive(jf + T::lit(2.0) - alpha);
        coefficients[0] = coefficients[0] - term;
        largest_term = largest_term.max(term.abs());
    }

    let tail = NthDerivative::new(f, n + 1);
    let order = T::from_count(n + 2) - alpha;
    let remainder_term = integral_of_order(&tail, p, order, a + delta)?.value;
    coefficients[0] = coefficients[0] - remainder_term;

    let tail_nodes = linspace(a, a + delta, 64);
    let tail_sup = roots::sample(&|t| tail.value(t), &tail_nodes)?
        .into_iter()
        .fold(T::zero(), |m, v| m.max(v.abs()));
    let factorial = (1..=n + 1).fold(T::one(), |acc, k| acc * T::from_count(k));
    let truncation_bound = tail_sup * delta.powi(n as i32 + 1) / factorial * lead;

    let mut estimate = PolynomialEstimate {
        a,
        delta,
        n,
        coefficients,
        remainder_term,
        roots_in_range: Vec::new(),
        truncation_bound,
        remainder_dominant: remainder_term.abs() > largest_term,
    };
    let poly = |s: T| Ok(estimate.eval(s));
    let nodes = linspace(T::zero(), delta, POLY_SCAN);
    let values = roots::sample(&poly, &nodes)?;
    let width = p.tolerances().mean_bracket_rel * delta;
    let mut found: Vec<Root<T>> = roots::roots_from_scan(&poly, &nodes, &values, width)?
        .into_iter()
        .filter(|r| r.x > T::zero() && r.x < delta)
        .collect();
    found.sort_by(|l, r| l.x.partial_cmp(&r.x).expect("roots are finite"));
    estimate.roots_in_range = found;
    Ok(estimate)
}

/// One row of [`xi_smoothness_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiProfilePoint<T> {
    pub x: T,
    pub xi: T,
    /// Centered difference of ξ (one-sided at the ends).
    pub slope: T,
}

/// Samples strictly monotone `f` on `(a, max x]`; errors otherwise.
pub(crate) fn require_strictly_monotone<T, F>(f: &F, lo: T, hi: T) -> Result<()>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let nodes = linspace(lo, hi, 1024);
    let values = roots::sample(&|t| f.value(t), &nodes)?;
    let steps: Vec<T> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.iter().all(|&d| d > T::zero()) || steps.iter().all(|&d| d < T::zero()) {
        Ok(())
    } else {
        Err(FracError::Hypothesis(format!(
            "f is not strictly monotone on [{lo}, {hi}]"
        )))
    }
}

/// Tabulates ξ(x) and its slope over `x_grid` for strictly monotone `f`.
pub fn xi_smoothness_profile<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x_grid: &[T],
    scan_n: usize,
) -> Result<Vec<XiProfilePoint<T>>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if x_grid.len() < 2 || x_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(FracError::InvalidParameter(
            "x grid must be strictly increasing with at least two points".into(),
        ));
    }
    require_strictly_monotone(f, p.a(), x_grid[x_grid.len() - 1])?;
    let xi: Vec<T> = x_grid
        .par_iter()
        .map(|&x| {
            mean_value(f, p, x, scan_n)?
                .xi_sup
                .ok_or_else(|| FracError::Solver(format!("mean value at x = {x} is degenerate")))
        })
        .collect::<Result<_>>()?;
    let last = x_grid.len() - 1;
    Ok((0..=last)
        .map(|k| {
            let (i, j) = (k.saturating_sub(1), (k + 1).min(last));
            XiProfilePoint {
                x: x_grid[k],
                xi: xi[k],
                slope: (xi[j] - xi[i]) / (x_grid[j] - x_grid[i]),
            }
        })
        .collect())
}

/// Searches `x_grid` for a sign change of
/// `R(x) = D^α_{a+} f(x) − d/dx[ f(h(x))·(x−a)^{1−α}/Γ(2−α) ]`
/// and refines the first one found. `None` is a valid outcome.
pub fn prop27_witness<T, F, H>(
    f: &F,
    h: &H,
    p: &FractionalParams<T>,
    x_grid: &[T],
) -> Result<Option<Root<T>>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
    H: ScalarFn<T> + ?Sized,
{
    p.check_base(f)?;
    let (a, alpha) = (p.a(), p.alpha());
    let d = DerivativeFn::new(f, a, alpha, p.grid_n())?;
    let scale = gamma_positive(T::lit(2.0) - alpha).recip();
    let weighted =
        |x: T| -> Result<T> { Ok(f.value(h.value(x)?)? * (x - a).powf(T::one() - alpha) * scale) };
    let step_base = T::epsilon().cbrt();
    let residual = |x: T| -> Result<T> {
        let s = (step_base * x.abs().max(T::one())).min((x - a) * T::lit(0.5));
        let slope = (weighted(x + s)? - weighted(x - s)?) / (s + s);
        Ok(d.value(x)? - slope)
    };
    let mut grid: Vec<T> = x_grid.iter().copied().filter(|&x| x > a).collect();
    grid.sort_by(|l, r| l.partial_cmp(r).expect("grid is finite"));
    if grid.len() < 2 {
        return Ok(None);
    }
    let values = roots::sample(&residual, &grid)?;
    let span = grid[grid.len() - 1] - grid[0];
    let width = p.tolerances().bracket_rel * span;
    Ok(roots::roots_from_scan(&residual, &grid, &values, width)?
        .into_iter()
        .next())
}
