//! Gamma function via the Lanczos approximation (g = 7, n = 9).

use crate::error::{FracError, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// (n-1)! for n = 1..=20, exact in f64.
const FACTORIAL: [f64; 20] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
];

/// Γ(z) for z > 0.
///
/// Every Gamma argument the engine needs (α, 1−α, 2−α, j+2−α, β+1, ...) is
/// positive, so non-positive arguments are rejected instead of reflected.
pub fn gamma<T: Real>(z: T) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(FracError::InvalidParameter(format!(
            "gamma requires a finite positive argument, got {z}"
        )));
    }
    Ok(gamma_positive(z))
}

/// Γ(z) without argument validation; callers guarantee z > 0.
pub(crate) fn gamma_positive<T: Real>(z: T) -> T {
    if z == z.floor() && z <= T::lit(20.0) {
        let n = z.to_usize().unwrap_or(1);
        return T::lit(FACTORIAL[n - 1]);
    }
    if z < T::lit(0.5) {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let pi = T::PI();
        return pi / ((pi * z).sin() * lanczos(T::one() - z));
    }
    lanczos(z)
}

fn lanczos<T: Real>(z: T) -> T {
    let z = z - T::one();
    let mut sum = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum = sum + T::lit(c) / (z + T::from_count(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let half_power = t.powf((z + T::lit(0.5)) * T::lit(0.5));
    (T::TAU()).sqrt() * half_power * (half_power * (-t).exp()) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_are_factorials() {
        assert_eq!(gamma(1.0_f64).unwrap(), 1.0);
        assert_eq!(gamma(2.0_f64).unwrap(), 1.0);
        assert_eq!(gamma(6.0_f64).unwrap(), 120.0);
    }

    #[test]
    fn half_integer_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5_f64).unwrap() - sqrt_pi).abs() < 1e-14);
        // Γ(3.5) = 2.5 · 1.5 · 0.5 · Γ(0.5)
        let by_recurrence = 2.5 * 1.5 * 0.5 * sqrt_pi;
        let g = gamma(3.5_f64).unwrap();
        assert!((g / by_recurrence - 1.0).abs() < 1e-13, "{g}");
        assert!((g - 3.323_350_970_447_842_6).abs() < 1e-12);
    }

    #[test]
    fn recurrence_holds_off_the_integers() {
        for &z in &[0.01, 0.1, 0.3, 0.7, 1.3, 2.9, 4.45, 9.7] {
            let lhs = gamma(z + 1.0_f64).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn small_argument_reference() {
        // Γ(0.1) = 9.513507698668731836...
        assert!((gamma(0.1_f64).unwrap() - 9.513_507_698_668_732).abs() < 1e-12);
    }

    #[test]
    fn single_precision() {
        let g = gamma(0.5_f32).unwrap();
        assert!((g - std::f32::consts::PI.sqrt()).abs() < 1e-5);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(gamma(0.0_f64).is_err());
        assert!(gamma(-1.5_f64).is_err());
        assert!(gamma(f64::NAN).is_err());
    }
}
