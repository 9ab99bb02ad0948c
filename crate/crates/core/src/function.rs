//! Scalar functions of one variable as consumed by the operators.

use crate::error::{FracError, Result};
use crate::expr::Expression;
use crate::scalar::Real;

/// A real function of one real variable with an optional first derivative.
///
/// Every operator in the crate is written against this trait so that parsed
/// expressions, closures and derived quantities (for example a fractional
/// derivative used as the integrand of another operator) compose freely.
pub trait ScalarFn<T: Real>: Sync {
    fn value(&self, t: T) -> Result<T>;

    fn derivative(&self, _t: T) -> Result<T> {
        Err(FracError::NoDerivative)
    }
}

impl<T: Real> ScalarFn<T> for Expression {
    fn value(&self, t: T) -> Result<T> {
        Ok(self.eval(t)?)
    }

    fn derivative(&self, t: T) -> Result<T> {
        Ok(self.eval_with_derivative(t)?.1)
    }
}

impl<T: Real, F: ScalarFn<T> + ?Sized> ScalarFn<T> for &F {
    fn value(&self, t: T) -> Result<T> {
        (**self).value(t)
    }

    fn derivative(&self, t: T) -> Result<T> {
        (**self).derivative(t)
    }
}

/// Closure-backed function without a derivative.
pub struct FnValue<F>(pub F);

impl<T: Real, F: Fn(T) -> Result<T> + Sync> ScalarFn<T> for FnValue<F> {
    fn value(&self, t: T) -> Result<T> {
        (self.0)(t)
    }
}

/// Closure-backed function with an explicit derivative.
pub struct FnPair<F, G> {
    pub value: F,
    pub derivative: G,
}

impl<T, F, G> ScalarFn<T> for FnPair<F, G>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
    G: Fn(T) -> Result<T> + Sync,
{
    fn value(&self, t: T) -> Result<T> {
        (self.value)(t)
    }

    fn derivative(&self, t: T) -> Result<T> {
        (self.derivative)(t)
    }
}

/// `t ↦ f(t + shift)`.
pub struct Shifted<F, T> {
    pub inner: F,
    pub shift: T,
}

impl<T: Real, F: ScalarFn<T>> ScalarFn<T> for Shifted<F, T> {
    fn value(&self, t: T) -> Result<T> {
        self.inner.value(t + self.shift)
    }

    fn derivative(&self, t: T) -> Result<T> {
        self.inner.derivative(t + self.shift)
    }
}

/// The `k`-th derivative of an expression, evaluated through Taylor jets.
pub struct NthDerivative<'a> {
    pub expr: &'a Expression,
    pub k: usize,
}

impl<'a> NthDerivative<'a> {
    pub fn new(expr: &'a Expression, k: usize) -> Self {
        Self { expr, k }
    }
}

impl<T: Real> ScalarFn<T> for NthDerivative<'_> {
    fn value(&self, t: T) -> Result<T> {
        match self.k {
            0 => Ok(self.expr.eval(t)?),
            1 => Ok(self.expr.eval_with_derivative(t)?.1),
            k => Ok(self.expr.derivatives(t, k)?.derivative(k)),
        }
    }

    fn derivative(&self, t: T) -> Result<T> {
        let k = self.k + 1;
        Ok(self.expr.derivatives(t, k)?.derivative(k))
    }
}

/// `t ↦ f′(t)` for any function that provides a derivative.
pub struct Derivative<F>(pub F);

impl<T: Real, F: ScalarFn<T>> ScalarFn<T> for Derivative<F> {
    fn value(&self, t: T) -> Result<T> {
        self.0.derivative(t)
    }
}
