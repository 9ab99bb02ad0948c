//! Truncated Taylor series arithmetic.
//!
//! A jet of length n+1 at centre c stores `f^(j)(c) / j!` for j = 0..=n.
//! Every operation below is the matching recurrence on power-series
//! coefficients, truncated at the jet's order.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet<T> {
    center: T,
    coeffs: Vec<T>,
}

/// Reason a jet operation has no Taylor expansion at the centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetDomain {
    DivisionByZero,
    LogNonPositive,
    SqrtNonPositive,
    AbsAtZero,
    PowNonPositiveBase,
}

impl JetDomain {
    pub fn describe(self) -> &'static str {
        match self {
            JetDomain::DivisionByZero => "division by zero",
            JetDomain::LogNonPositive => "log of a non-positive value",
            JetDomain::SqrtNonPositive => "sqrt is not differentiable at or below 0",
            JetDomain::AbsAtZero => "abs is not differentiable at 0",
            JetDomain::PowNonPositiveBase => "non-integer power of a non-positive base",
        }
    }
}

impl<T: Real> TaylorJet<T> {
    /// Jet of the constant `value`.
    pub fn constant(center: T, value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// Jet of the identity function: `[c, 1, 0, ...]`.
    pub fn variable(center: T, order: usize) -> Self {
        let mut jet = Self::constant(center, center, order);
        if order >= 1 {
            jet.coeffs[1] = T::one();
        }
        jet
    }

    pub fn from_coefficients(center: T, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet holds at least the value");
        Self { center, coeffs }
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// Scaled coefficients `f^(j)(c)/j!`.
    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// Unscaled derivative `f^(j)(c)`.
    pub fn derivative(&self, j: usize) -> T {
        let mut factorial = T::one();
        for k in 2..=j {
            factorial = factorial * T::from_count(k);
        }
        self.coeffs[j] * factorial
    }

    /// Evaluates the truncated series at `center + h`.
    pub fn eval_offset(&self, h: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * h + c)
    }

    pub(crate) fn all_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    fn with_coeffs(&self, coeffs: Vec<T>) -> Self {
        Self {
            center: self.center,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|&c| -c).collect())
    }

    pub fn scale(&self, k: T) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|&c| c * k).collect())
    }

    fn zip(&self, other: &Self, op: impl Fn(T, T) -> T) -> Self {
        debug_assert_eq!(self.len(), other.len());
        self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        )
    }

    /// Cauchy product truncated at the jet order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len();
        let mut out = vec![T::zero(); n];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = T::zero();
            for j in 0..=k {
                acc = acc + self.coeffs[j] * other.coeffs[k - j];
            }
            *slot = acc;
        }
        self.with_coeffs(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self, JetDomain> {
        let b0 = other.coeffs[0];
        if b0 == T::zero() {
            return Err(JetDomain::DivisionByZero);
        }
        let n = self.len();
        let mut q = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc = acc - other.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Ok(self.with_coeffs(q))
    }

    pub fn exp(&self) -> Self {
        let n = self.len();
        let mut e = vec![T::zero(); n];
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_count(j) * self.coeffs[j] * e[k - j];
            }
            e[k] = acc / T::from_count(k);
        }
        self.with_coeffs(e)
    }

    pub fn ln(&self) -> Result<Self, JetDomain> {
        let u0 = self.coeffs[0];
        if !(u0 > T::zero()) {
            return Err(JetDomain::LogNonPositive);
        }
        let n = self.len();
        let mut l = vec![T::zero(); n];
        l[0] = u0.ln();
        for k in 1..n {
            let mut acc = T::zero();
            for (j, &lj) in l.iter().enumerate().take(k).skip(1) {
                acc = acc + T::from_count(j) * lj * self.coeffs[k - j];
            }
            l[k] = (self.coeffs[k] - acc / T::from_count(k)) / u0;
        }
        Ok(self.with_coeffs(l))
    }

    /// Returns `(sin u, cos u)` from the coupled recurrence.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.len();
        let mut s = vec![T::zero(); n];
        let mut c = vec![T::zero(); n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..n {
            let mut acc_s = T::zero();
            let mut acc_c = T::zero();
            for j in 1..=k {
                let ju = T::from_count(j) * self.coeffs[j];
                acc_s = acc_s + ju * c[k - j];
                acc_c = acc_c + ju * s[k - j];
            }
            let kk = T::from_count(k);
            s[k] = acc_s / kk;
            c[k] = -acc_c / kk;
        }
        (self.with_coeffs(s), self.with_coeffs(c))
    }

    pub fn sqrt(&self) -> Result<Self, JetDomain> {
        let u0 = self.coeffs[0];
        let n = self.len();
        if n == 1 && u0 >= T::zero() {
            return Ok(self.with_coeffs(vec![u0.sqrt()]));
        }
        if !(u0 > T::zero()) {
            return Err(JetDomain::SqrtNonPositive);
        }
        let mut r = vec![T::zero(); n];
        r[0] = u0.sqrt();
        let two_r0 = r[0] + r[0];
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc = acc - r[j] * r[k - j];
            }
            r[k] = acc / two_r0;
        }
        Ok(self.with_coeffs(r))
    }

    pub fn abs(&self) -> Result<Self, JetDomain> {
        let u0 = self.coeffs[0];
        if self.len() == 1 {
            return Ok(self.with_coeffs(vec![u0.abs()]));
        }
        if u0 == T::zero() {
            return Err(JetDomain::AbsAtZero);
        }
        Ok(if u0 < T::zero() {
            self.neg()
        } else {
            self.clone()
        })
    }

    /// Integer power by repeated squaring; valid for any base sign.
    pub fn powi(&self, k: i64) -> Result<Self, JetDomain> {
        let mut result = Self::constant(self.center, T::one(), self.order());
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if k < 0 {
            Self::constant(self.center, T::one(), self.order()).div(&result)
        } else {
            Ok(result)
        }
    }

    /// `u^v = exp(v · ln u)`, defined for u > 0.
    pub fn pow(&self, exponent: &Self) -> Result<Self, JetDomain> {
        if !(self.coeffs[0] > T::zero()) {
            return Err(JetDomain::PowNonPositiveBase);
        }
        Ok(exponent.mul(&self.ln()?).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn identity_jet() {
        let j = TaylorJet::variable(2.5_f64, 3);
        assert_eq!(j.coefficients(), &[2.5, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn exp_and_log_invert() {
        let u = TaylorJet::variable(0.7_f64, 5).mul(&TaylorJet::variable(0.7, 5));
        let back = u.exp().ln().unwrap();
        close(back.coefficients(), u.coefficients(), 1e-14);
    }

    #[test]
    fn sqrt_squares_back() {
        let u = TaylorJet::variable(1.3_f64, 6).exp();
        let r = u.sqrt().unwrap();
        close(r.mul(&r).coefficients(), u.coefficients(), 1e-14);
    }

    #[test]
    fn division_inverts_multiplication() {
        let u = TaylorJet::variable(0.4_f64, 5).sin_cos().0;
        let v = TaylorJet::variable(0.4_f64, 5).exp();
        let q = u.mul(&v).div(&v).unwrap();
        close(q.coefficients(), u.coefficients(), 1e-14);
    }

    #[test]
    fn negative_base_integer_power() {
        // (t)^3 at t = -2: -8, 12, -6, 1
        let j = TaylorJet::variable(-2.0_f64, 3).powi(3).unwrap();
        assert_eq!(j.coefficients(), &[-8.0, 12.0, -6.0, 1.0]);
        let inv = TaylorJet::variable(-2.0_f64, 2).powi(-1).unwrap();
        close(inv.coefficients(), &[-0.5, -0.25, -0.125], 1e-15);
    }

    #[test]
    fn singular_points_are_refused() {
        let zero = TaylorJet::variable(0.0_f64, 2);
        assert_eq!(zero.abs(), Err(JetDomain::AbsAtZero));
        assert_eq!(zero.sqrt(), Err(JetDomain::SqrtNonPositive));
        assert_eq!(zero.ln(), Err(JetDomain::LogNonPositive));
        assert!(TaylorJet::constant(0.0_f64, 1.0, 2).div(&zero).is_err());
    }
}
