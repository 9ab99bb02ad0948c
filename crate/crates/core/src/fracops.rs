//! Riemann–Liouville and Caputo operators on `[a, x]`.

use crate::config::Tolerances;
use crate::error::{FracError, Result};
use crate::function::ScalarFn;
use crate::quad::{self, Estimate, ProductRule};
use crate::scalar::Real;
use crate::special::gamma_positive;

pub use crate::special::gamma;

/// Quadrature backend behind an [`OperatorValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Fixed-grid product integration with a grid-halving error estimate.
    ProductTrapezoid,
    /// Adaptive Gauss–Kronrod with the singular panel mapped out.
    AdaptiveOracle,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::ProductTrapezoid => "product_trapezoid",
            Backend::AdaptiveOracle => "adaptive_oracle",
        }
    }
}

/// How [`rl_derivative`] evaluates `D^α_{a+} f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeMethod {
    /// `I^{1−α} f′`, exact for the RL derivative when f(a) = 0.
    CaputoForm,
    /// Centered difference of `x ↦ I^{1−α} f(x)` with step `(x−a)/grid_n`.
    Direct,
}

/// Order, base point, resolution and numerical policy of an operator call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalParams<T> {
    alpha: T,
    a: T,
    grid_n: usize,
    backend: Option<Backend>,
    tol: Tolerances<T>,
}

impl<T: Real> FractionalParams<T> {
    /// Requires 0 < α < 1 strictly and `grid_n ≥ 2`.
    pub fn new(alpha: T, a: T, grid_n: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(FracError::InvalidParameter(format!(
                "order alpha must satisfy 0 < alpha < 1, got {alpha}"
            )));
        }
        if !a.is_finite() {
            return Err(FracError::InvalidParameter(format!(
                "base point a must be finite, got {a}"
            )));
        }
        if grid_n < 2 {
            return Err(FracError::InvalidParameter(format!(
                "grid_n must be at least 2, got {grid_n}"
            )));
        }
        Ok(Self {
            alpha,
            a,
            grid_n,
            backend: None,
            tol: Tolerances::default(),
        })
    }

    pub fn with_alpha(self, alpha: T) -> Result<Self> {
        Ok(Self {
            backend: self.backend,
            tol: self.tol,
            ..Self::new(alpha, self.a, self.grid_n)?
        })
    }

    pub fn with_base(self, a: T) -> Result<Self> {
        Ok(Self {
            backend: self.backend,
            tol: self.tol,
            ..Self::new(self.alpha, a, self.grid_n)?
        })
    }

    pub fn with_grid(self, grid_n: usize) -> Result<Self> {
        Ok(Self {
            backend: self.backend,
            tol: self.tol,
            ..Self::new(self.alpha, self.a, grid_n)?
        })
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = Some(backend);
        self
    }

    pub fn with_tolerances(mut self, tol: Tolerances<T>) -> Self {
        self.tol = tol;
        self
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// The explicitly chosen backend, or product trapezoid.
    pub fn backend(&self) -> Backend {
        self.backend.unwrap_or(Backend::ProductTrapezoid)
    }

    /// The explicitly chosen backend, or `fallback`.
    pub fn backend_or(&self, fallback: Backend) -> Backend {
        self.backend.unwrap_or(fallback)
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    /// Fails with [`FracError::NonzeroBase`] unless |f(a)| is within tolerance
    /// or the tolerances allow a nonzero base. Returns f(a).
    pub fn check_base<F: ScalarFn<T> + ?Sized>(&self, f: &F) -> Result<T> {
        let fa = f.value(self.a)?;
        if fa.abs() > self.tol.base_zero && !self.tol.allow_nonzero_base {
            return Err(FracError::NonzeroBase {
                a: self.a.as_f64(),
                value: fa.as_f64(),
            });
        }
        Ok(fa)
    }

    fn require_right_of_base(&self, x: T) -> Result<()> {
        if x > self.a && x.is_finite() {
            Ok(())
        } else {
            Err(FracError::InvalidParameter(format!(
                "evaluation point x = {x} must lie to the right of a = {}",
                self.a
            )))
        }
    }
}

/// An operator value with the backend's own error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorValue<T> {
    pub value: T,
    pub backend: Backend,
    pub est_error: T,
}

impl<T: Real> OperatorValue<T> {
    fn from_estimate(e: Estimate<T>, scale: T, backend: Backend) -> Self {
        Self {
            value: e.value * scale,
            backend,
            est_error: e.error * scale.abs(),
        }
    }
}

/// Reading of the windowed derivative `D^α_{x₀+} f(x − x₀)` at `x = x₀ + δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WindowConvention {
    /// Caputo derivative of `f` itself over `[x₀, x₀ + δ]`.
    #[default]
    Absolute,
    /// Caputo derivative of `t ↦ f(t − x₀)` over `[x₀, x₀ + δ]`, which is the
    /// Caputo derivative of `f` over `[0, δ]` for every window.
    Anchored,
}

/// A window `[x0, x0 + delta]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec<T> {
    pub x0: T,
    pub delta: T,
    pub convention: WindowConvention,
}

impl<T: Real> WindowSpec<T> {
    pub fn new(x0: T, delta: T) -> Result<Self> {
        if !(delta > T::zero()) || !x0.is_finite() || !delta.is_finite() {
            return Err(FracError::InvalidParameter(format!(
                "window needs finite x0 and delta > 0, got x0 = {x0}, delta = {delta}"
            )));
        }
        Ok(Self {
            x0,
            delta,
            convention: WindowConvention::Absolute,
        })
    }

    pub fn with_convention(mut self, convention: WindowConvention) -> Self {
        self.convention = convention;
        self
    }

    /// The `[start, end]` interval the Caputo derivative is taken over.
    pub fn interval(&self) -> (T, T) {
        match self.convention {
            WindowConvention::Absolute => (self.x0, self.x0 + self.delta),
            WindowConvention::Anchored => (T::zero(), self.delta),
        }
    }
}

/// ∫_a^x g(t)(x−t)^{order−1} dt on the chosen backend, without the 1/Γ factor.
fn kernel_integral<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    order: T,
    x: T,
    backend: Backend,
) -> Result<Estimate<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let exponent = order - T::one();
    match backend {
        Backend::ProductTrapezoid => quad::richardson(p.grid_n, exponent, |rule| {
            rule.integrate(|t| f.value(t), p.a, x)
        }),
        Backend::AdaptiveOracle => quad::oracle_kernel_integral(
            |t| f.value(t),
            p.a,
            x,
            exponent,
            p.tol.oracle_rel,
            p.tol.oracle_abs,
        ),
    }
}

/// ∫_a^x f′(t)(x−t)^{exponent} dt on the chosen backend.
fn derivative_kernel_integral<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    exponent: T,
    x: T,
    backend: Backend,
) -> Result<Estimate<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    match backend {
        Backend::ProductTrapezoid => quad::richardson(p.grid_n, exponent, |rule| {
            rule.integrate_derivative(f, p.a, x)
        }),
        Backend::AdaptiveOracle => quad::oracle_kernel_integral(
            |t| f.derivative(t),
            p.a,
            x,
            exponent,
            p.tol.oracle_rel,
            p.tol.oracle_abs,
        ),
    }
}

/// `I^{order}_{a+} f(x)` for `order ∈ (0, 1]`.
pub fn rl_integral<T, F>(f: &F, p: &FractionalParams<T>, order: T, x: T) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if !(order > T::zero() && order <= T::one()) {
        return Err(FracError::InvalidParameter(format!(
            "integral order must lie in (0, 1], got {order}"
        )));
    }
    integral_of_order(f, p, order, x)
}

/// `I^{order}_{a+} f(x)` for any `order > 0`.
///
/// Orders above one have a bounded, continuous kernel and use the same
/// quadrature directly.
pub fn integral_of_order<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    order: T,
    x: T,
) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    if !(order > T::zero()) || !order.is_finite() {
        return Err(FracError::InvalidParameter(format!(
            "integral order must be positive, got {order}"
        )));
    }
    p.require_right_of_base(x)?;
    let backend = p.backend();
    let e = kernel_integral(f, p, order, x, backend)?;
    Ok(OperatorValue::from_estimate(
        e,
        gamma_positive(order).recip(),
        backend,
    ))
}

/// Caputo derivative `(1/Γ(1−α)) ∫_a^x f′(t)(x−t)^{−α} dt`.
pub fn caputo_derivative<T, F>(f: &F, p: &FractionalParams<T>, x: T) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    p.require_right_of_base(x)?;
    let backend = p.backend();
    let e = derivative_kernel_integral(f, p, -p.alpha, x, backend)?;
    Ok(OperatorValue::from_estimate(
        e,
        gamma_positive(T::one() - p.alpha).recip(),
        backend,
    ))
}

/// Riemann–Liouville derivative `D^α_{a+} f(x) = d/dx I^{1−α}_{a+} f(x)`.
///
/// `CaputoForm` requires f(a) = 0 unless the tolerances allow a nonzero
/// base, in which case the Caputo value is returned.
pub fn rl_derivative<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x: T,
    method: DerivativeMethod,
) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    p.require_right_of_base(x)?;
    match method {
        DerivativeMethod::CaputoForm => {
            p.check_base(f)?;
            caputo_derivative(f, p, x)
        }
        DerivativeMethod::Direct => direct_derivative(f, p, x),
    }
}

/// Riemann–Liouville derivative for any f(a):
/// Caputo derivative plus `f(a)(x−a)^{−α}/Γ(1−α)`.
pub fn rl_derivative_any_base<T, F>(
    f: &F,
    p: &FractionalParams<T>,
    x: T,
) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let mut v = caputo_derivative(f, p, x)?;
    let fa = f.value(p.a)?;
    if fa != T::zero() {
        v.value = v.value + fa * (x - p.a).powf(-p.alpha) / gamma_positive(T::one() - p.alpha);
    }
    Ok(v)
}

fn direct_derivative<T, F>(f: &F, p: &FractionalParams<T>, x: T) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let order = T::one() - p.alpha;
    let h = (x - p.a) / T::from_count(p.grid_n);
    let at = |y: T| integral_of_order(f, p, order, y);
    let (plus, minus) = (at(x + h)?, at(x - h)?);
    let (plus2, minus2) = (at(x + h + h)?, at(x - h - h)?);
    let d1 = (plus.value - minus.value) / (h + h);
    let d2 = (plus2.value - minus2.value) / (T::lit(4.0) * h);
    let quad_err = (plus.est_error + minus.est_error) / (h + h);
    Ok(OperatorValue {
        value: d1,
        backend: plus.backend,
        est_error: (d1 - d2).abs() + quad_err,
    })
}

/// `f_{1−α}(x) = (1/Γ(2−α)) { f(a)(x−a)^{1−α} + ∫_a^x f′(t)(x−t)^{1−α} dt }`,
/// which equals `I^{1−α}_{a+} f(x)`.
pub fn f_lower<T, F>(f: &F, p: &FractionalParams<T>, x: T) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let backend = p.backend();
    if x == p.a {
        return Ok(OperatorValue {
            value: T::zero(),
            backend,
            est_error: T::zero(),
        });
    }
    p.require_right_of_base(x)?;
    let beta = T::one() - p.alpha;
    let e = derivative_kernel_integral(f, p, beta, x, backend)?;
    let boundary = f.value(p.a)? * (x - p.a).powf(beta);
    let shifted = Estimate {
        value: e.value + boundary,
        error: e.error,
    };
    Ok(OperatorValue::from_estimate(
        shifted,
        gamma_positive(T::one() + beta).recip(),
        backend,
    ))
}

/// Caputo derivative of `f` over a window, evaluated at the window's end.
pub fn windowed_derivative<T, F>(
    f: &F,
    w: &WindowSpec<T>,
    alpha: T,
    grid_n: usize,
) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    windowed_derivative_with(f, w, &FractionalParams::new(alpha, T::zero(), grid_n)?)
}

/// [`windowed_derivative`] using the order, grid and backend of `p`; the base
/// point of `p` is replaced by the window start.
pub fn windowed_derivative_with<T, F>(
    f: &F,
    w: &WindowSpec<T>,
    p: &FractionalParams<T>,
) -> Result<OperatorValue<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    let (start, end) = w.interval();
    caputo_derivative(f, &p.with_base(start)?, end)
}

/// `t ↦ I^{order}_{a+} f(t)` on a fixed product rule. Its derivative is
/// `I^{order} f′(t) + f(a)(t−a)^{order−1}/Γ(order)`.
pub struct IntegralFn<'f, F: ?Sized, T> {
    f: &'f F,
    a: T,
    order: T,
    scale: T,
    rule: ProductRule<T>,
}

impl<'f, F: ScalarFn<T> + ?Sized, T: Real> IntegralFn<'f, F, T> {
    pub fn new(f: &'f F, a: T, order: T, grid_n: usize) -> Result<Self> {
        if !(order > T::zero()) || grid_n < 2 {
            return Err(FracError::InvalidParameter(format!(
                "integral order must be positive and grid_n at least 2, got {order}, {grid_n}"
            )));
        }
        Ok(Self {
            f,
            a,
            order,
            scale: gamma_positive(order).recip(),
            rule: ProductRule::new(order - T::one(), grid_n),
        })
    }
}

impl<F: ScalarFn<T> + ?Sized, T: Real> ScalarFn<T> for IntegralFn<'_, F, T> {
    fn value(&self, t: T) -> Result<T> {
        if t <= self.a {
            return Ok(T::zero());
        }
        Ok(self.rule.integrate(|s| self.f.value(s), self.a, t)?.value * self.scale)
    }

    fn derivative(&self, t: T) -> Result<T> {
        if t <= self.a {
            return Err(FracError::InvalidParameter(format!(
                "derivative of a fractional integral requested at the base point {t}"
            )));
        }
        let inner = self.rule.integrate_derivative(self.f, self.a, t)?.value;
        let fa = self.f.value(self.a)?;
        let base = fa * (t - self.a).powf(self.order - T::one());
        Ok((inner + base) * self.scale)
    }
}

/// `t ↦ D^α_{a+} f(t)` (any base value) on a fixed product rule.
pub struct DerivativeFn<'f, F: ?Sized, T> {
    f: &'f F,
    a: T,
    alpha: T,
    scale: T,
    rule: ProductRule<T>,
}

impl<'f, F: ScalarFn<T> + ?Sized, T: Real> DerivativeFn<'f, F, T> {
    pub fn new(f: &'f F, a: T, alpha: T, grid_n: usize) -> Result<Self> {
        FractionalParams::new(alpha, a, grid_n)?;
        Ok(Self {
            f,
            a,
            alpha,
            scale: gamma_positive(T::one() - alpha).recip(),
            rule: ProductRule::new(-alpha, grid_n),
        })
    }
}

impl<F: ScalarFn<T> + ?Sized, T: Real> ScalarFn<T> for DerivativeFn<'_, F, T> {
    fn value(&self, t: T) -> Result<T> {
        let fa = self.f.value(self.a)?;
        if t <= self.a {
            return if fa == T::zero() {
                Ok(T::zero())
            } else {
                Err(FracError::InvalidParameter(format!(
                    "fractional derivative with f(a) != 0 is unbounded at the base point {t}"
                )))
            };
        }
        let caputo = self.rule.integrate_derivative(self.f, self.a, t)?.value;
        Ok((caputo + fa * (t - self.a).powf(-self.alpha)) * self.scale)
    }
}

/// Round trips `D^α I^α f` and `I^α D^α f` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionCheck<T> {
    pub x: T,
    pub f_x: T,
    pub derivative_of_integral: OperatorValue<T>,
    pub integral_of_derivative: OperatorValue<T>,
}

impl<T: Real> CompositionCheck<T> {
    pub fn derivative_of_integral_residual(&self) -> T {
        (self.derivative_of_integral.value - self.f_x).abs()
    }

    pub fn integral_of_derivative_residual(&self) -> T {
        (self.integral_of_derivative.value - self.f_x).abs()
    }
}

/// Evaluates both composition round trips with nested product rules.
///
/// Each chain is computed at `grid_n` and `grid_n/2` (inner and outer rules
/// together); their difference is the chain's error estimate. Requires f(a) = 0,
/// under which both round trips reproduce f(x).
pub fn composition_check<T, F>(f: &F, p: &FractionalParams<T>, x: T) -> Result<CompositionCheck<T>>
where
    T: Real,
    F: ScalarFn<T> + ?Sized,
{
    p.require_right_of_base(x)?;
    p.check_base(f)?;
    let (a, alpha) = (p.a, p.alpha);
    let forward = |n: usize| -> Result<quad::Sum<T>> {
        let inner = IntegralFn::new(f, a, alpha, n)?;
        let s = ProductRule::new(-alpha, n).integrate_derivative(&inner, a, x)?;
        Ok(scale_sum(s, gamma_positive(T::one() - alpha).recip()))
    };
    let backward = |n: usize| -> Result<quad::Sum<T>> {
        let inner = DerivativeFn::new(f, a, alpha, n)?;
        let s = ProductRule::new(alpha - T::one(), n).integrate(|t| inner.value(t), a, x)?;
        Ok(scale_sum(s, gamma_positive(alpha).recip()))
    };
    let n = p.grid_n;
    let coarse = (n / 2).max(2);
    let pack = |fine: quad::Sum<T>, coarse: quad::Sum<T>| OperatorValue {
        value: fine.value,
        backend: Backend::ProductTrapezoid,
        est_error: (fine.value - coarse.value)
            .abs()
            .max(T::roundoff_floor() * fine.magnitude),
    };
    Ok(CompositionCheck {
        x,
        f_x: f.value(x)?,
        derivative_of_integral: pack(forward(n)?, forward(coarse)?),
        integral_of_derivative: pack(backward(n)?, backward(coarse)?),
    })
}

fn scale_sum<T: Real>(s: quad::Sum<T>, k: T) -> quad::Sum<T> {
    quad::Sum {
        value: s.value * k,
        magnitude: s.magnitude * k.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FnPair;

    #[test]
    fn params_validate_order_base_and_grid() {
        assert!(FractionalParams::new(0.0, 0.0, 16).is_err());
        assert!(FractionalParams::new(1.0, 0.0, 16).is_err());
        assert!(FractionalParams::new(0.5, f64::NAN, 16).is_err());
        assert!(FractionalParams::new(0.5, 0.0, 1).is_err());
        let p = FractionalParams::new(0.5, 0.0, 16)
            .unwrap()
            .with_backend(Backend::AdaptiveOracle);
        let q = p.with_alpha(0.25).unwrap();
        assert_eq!(q.backend(), Backend::AdaptiveOracle);
        assert_eq!(q.alpha(), 0.25);
    }

    #[test]
    fn base_check_respects_override() {
        let one = FnPair {
            value: |_: f64| Ok(1.0),
            derivative: |_: f64| Ok(0.0),
        };
        let p = FractionalParams::new(0.5, 0.0, 16).unwrap();
        assert!(matches!(
            p.check_base(&one),
            Err(FracError::NonzeroBase { .. })
        ));
        let mut tol = *p.tolerances();
        tol.allow_nonzero_base = true;
        assert_eq!(p.with_tolerances(tol).check_base(&one).unwrap(), 1.0);
    }

    #[test]
    fn anchored_window_starts_at_zero() {
        let w = WindowSpec::new(2.0, 0.5).unwrap();
        assert_eq!(w.interval(), (2.0, 2.5));
        assert_eq!(
            w.with_convention(WindowConvention::Anchored).interval(),
            (0.0, 0.5)
        );
        assert!(WindowSpec::new(0.0, 0.0).is_err());
    }

    #[test]
    fn evaluation_point_must_exceed_base() {
        let p = FractionalParams::new(0.5, 1.0, 16).unwrap();
        assert!(p.require_right_of_base(1.0).is_err());
        assert!(p.require_right_of_base(f64::INFINITY).is_err());
        assert!(p.require_right_of_base(1.5).is_ok());
    }
}
