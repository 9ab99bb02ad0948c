//! Weakly singular quadrature for ∫_a^x g(t)(x−t)^p dt with p > −1.
//!
//! Two independent schemes live here:
//!
//! * [`ProductRule`]: a fixed-grid product-integration rule. The half
//!   `[m, x]` next to the kernel singularity integrates the piecewise-linear
//!   interpolant of `g` exactly against `(x−t)^p`; the half `[a, m]`, where
//!   the kernel is smooth, uses Simpson's rule on the graded variable
//!   `t = a + (x−a)v²/2`, which also absorbs algebraic behaviour of `g` at `a`.
//! * [`oracle_kernel_integral`]: globally adaptive Gauss–Kronrod (7-point
//!   Gauss 10 / Kronrod 21) with the singular panel mapped by `u = (x−t)^{p+1}`.

use crate::error::{FracError, Result};
use crate::function::ScalarFn;
use crate::scalar::Real;

/// A quadrature value with its own error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate<T> {
    pub value: T,
    pub error: T,
}

/// Value plus Σ|terms|, the scale of the accumulated rounding error.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sum<T> {
    pub value: T,
    pub magnitude: T,
}

impl<T: Real> Sum<T> {
    fn zero() -> Self {
        Self {
            value: T::zero(),
            magnitude: T::zero(),
        }
    }

    #[inline]
    fn push(&mut self, term: T) {
        self.value = self.value + term;
        self.magnitude = self.magnitude + term.abs();
    }

    fn scaled(self, k: T) -> Self {
        Self {
            value: self.value * k,
            magnitude: self.magnitude * k.abs(),
        }
    }

    fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            magnitude: self.magnitude + other.magnitude,
        }
    }
}

#[allow(clippy::excessive_precision)]
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
#[allow(clippy::excessive_precision)]
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Moments J0 = ∫₀¹(c+u)^p du and J1 = ∫₀¹ u(c+u)^p du.
pub(crate) fn kernel_moments<T: Real>(p: T, c: usize) -> (T, T) {
    let c = T::from_count(c);
    if c < T::lit(4.0) {
        let p1 = p + T::one();
        let p2 = p1 + T::one();
        let j0 = ((c + T::one()).powf(p1) - c.powf(p1)) / p1;
        let j1 = ((c + T::one()).powf(p2) - c.powf(p2)) / p2 - c * j0;
        return (j0, j1);
    }
    // The closed forms cancel catastrophically for large c; the integrands
    // are analytic on a disc of radius c around [0, 1].
    let half = T::lit(0.5);
    let (mut j0, mut j1) = (T::zero(), T::zero());
    for (&node, &weight) in GL8_NODES.iter().zip(&GL8_WEIGHTS) {
        for sign in [-1.0, 1.0] {
            let u = half + half * T::lit(sign * node);
            let w = half * T::lit(weight);
            let k = (c + u).powf(p);
            j0 = j0 + w * k;
            j1 = j1 + w * u * k;
        }
    }
    (j0, j1)
}

/// Precomputed product-integration rule for a fixed exponent and grid size.
///
/// The far-half node weights depend only on `p` and the panel count, so one
/// rule serves every evaluation point `x` and base `a`.
#[derive(Debug, Clone)]
pub(crate) struct ProductRule<T> {
    p: T,
    near: usize,
    far: usize,
    far_weights: Vec<T>,
}

impl<T: Real> ProductRule<T> {
    /// Rule for kernel `(x−t)^p` with `n ≥ 2` subintervals in total.
    pub fn new(p: T, n: usize) -> Self {
        debug_assert!(p > -T::one() && n >= 2);
        let near = n / 2;
        let far = n - near;
        let mut far_weights = vec![T::zero(); far + 1];
        for k in 0..far {
            let (j0, j1) = kernel_moments(p, far - 1 - k);
            far_weights[k] = far_weights[k] + j1;
            far_weights[k + 1] = far_weights[k + 1] + (j0 - j1);
        }
        Self {
            p,
            near,
            far,
            far_weights,
        }
    }

    /// Graded rule for ∫_a^m g(t)(x−t)^q dt, m = (a+x)/2: composite Simpson in
    /// `v` when the panel count is even, trapezoid otherwise.
    fn near_half<G>(&self, g: &G, q: T, a: T, x: T) -> Result<Sum<T>>
    where
        G: Fn(T) -> Result<T>,
    {
        let len = x - a;
        let half_len = len * T::lit(0.5);
        let n = self.near;
        let step = T::one() / T::from_count(n);
        let simpson = n.is_multiple_of(2);
        let mut sum = Sum::zero();
        // The v = 0 node carries the Jacobian factor v and contributes nothing.
        for i in 1..=n {
            let v = T::from_count(i) * step;
            let t = a + half_len * v * v;
            let w = match (simpson, i == n, i % 2 == 1) {
                (true, true, _) => T::lit(1.0 / 3.0),
                (true, false, true) => T::lit(4.0 / 3.0),
                (true, false, false) => T::lit(2.0 / 3.0),
                (false, true, _) => T::lit(0.5),
                (false, false, _) => T::one(),
            };
            sum.push(w * g(t)? * (x - t).powf(q) * v);
        }
        Ok(sum.scaled(len * step))
    }

    /// Product trapezoid for ∫_m^x g(t)(x−t)^p dt.
    fn far_half<G>(&self, g: &G, a: T, x: T) -> Result<Sum<T>>
    where
        G: Fn(T) -> Result<T>,
    {
        let m = a + (x - a) * T::lit(0.5);
        let h = (x - m) / T::from_count(self.far);
        let mut sum = Sum::zero();
        for (k, &w) in self.far_weights.iter().enumerate() {
            let t = if k == self.far {
                x
            } else {
                m + T::from_count(k) * h
            };
            sum.push(w * g(t)?);
        }
        Ok(sum.scaled(h.powf(self.p + T::one())))
    }

    /// ∫_a^x g(t)(x−t)^p dt; `g` is never sampled at `a`.
    pub fn integrate<G>(&self, g: G, a: T, x: T) -> Result<Sum<T>>
    where
        G: Fn(T) -> Result<T>,
    {
        Ok(self
            .near_half(&g, self.p, a, x)?
            .plus(self.far_half(&g, a, x)?))
    }

    /// ∫_a^x f′(t)(x−t)^p dt.
    ///
    /// On the near half the derivative of `f − f(a)` is moved onto the kernel
    /// by parts, so `f′` is only sampled on `[m, x]` and may be singular at
    /// `a`, and constants integrate to exactly zero.
    pub fn integrate_derivative<F>(&self, f: &F, a: T, x: T) -> Result<Sum<T>>
    where
        F: ScalarFn<T> + ?Sized,
    {
        let m = a + (x - a) * T::lit(0.5);
        let p = self.p;
        let fa = f.value(a)?;
        let mut boundary = Sum::zero();
        boundary.push((f.value(m)? - fa) * (x - m).powf(p));
        let by_parts = if p == T::zero() {
            Sum::zero()
        } else {
            self.near_half(&|t| Ok(f.value(t)? - fa), p - T::one(), a, x)?
                .scaled(p)
        };
        let far = self.far_half(&|t| f.derivative(t), a, x)?;
        Ok(boundary.plus(by_parts).plus(far))
    }
}

/// Fine/coarse pair of one quadrature, giving a Richardson-style estimate.
pub(crate) fn richardson<T, Q>(n: usize, p: T, quad: Q) -> Result<Estimate<T>>
where
    T: Real,
    Q: Fn(&ProductRule<T>) -> Result<Sum<T>>,
{
    let fine = quad(&ProductRule::new(p, n))?;
    let coarse = quad(&ProductRule::new(p, (n / 2).max(2)))?;
    let error = (fine.value - coarse.value)
        .abs()
        .max(T::roundoff_floor() * fine.magnitude);
    Ok(Estimate {
        value: fine.value,
        error,
    })
}

/// Product trapezoid on the uniform grid `t_j = j·h`, j = 0..g.len()−1:
/// entry k is ∫_0^{t_k} g̃(t)(t_k − t)^p dt for the piecewise-linear
/// interpolant g̃. Weights depend only on k − j (Toeplitz), so the whole
/// table costs O(N²) multiply-adds.
pub(crate) fn uniform_convolution<T: Real>(g: &[T], p: T, h: T) -> Vec<T> {
    let n = g.len();
    let moments: Vec<(T, T)> = (0..n).map(|c| kernel_moments(p, c)).collect();
    let scale = h.powf(p + T::one());
    (0..n)
        .map(|k| {
            let mut acc = T::zero();
            for i in 0..k {
                let (j0, j1) = moments[k - 1 - i];
                acc = acc + j1 * g[i] + (j0 - j1) * g[i + 1];
            }
            acc * scale
        })
        .collect()
}

// Kronrod 21 abscissae (descending, last is the centre) and weights, and the
// embedded Gauss 10 weights for the odd-indexed abscissae.
#[allow(clippy::excessive_precision)]
const GK_NODES: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const GK_WEIGHTS: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_322_808_035,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const G10_WEIGHTS: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

fn gauss_kronrod<T, G>(g: &G, lo: T, hi: T) -> Result<Panel<T>>
where
    T: Real,
    G: Fn(T) -> Result<T>,
{
    let centre = (lo + hi) * T::lit(0.5);
    let half = (hi - lo) * T::lit(0.5);
    let mid = g(centre)?;
    let mut kronrod = T::lit(GK_WEIGHTS[10]) * mid;
    let mut gauss = T::zero();
    for i in 0..10 {
        let dx = half * T::lit(GK_NODES[i]);
        let pair = g(centre - dx)? + g(centre + dx)?;
        kronrod = kronrod + T::lit(GK_WEIGHTS[i]) * pair;
        if i % 2 == 1 {
            gauss = gauss + T::lit(G10_WEIGHTS[i / 2]) * pair;
        }
    }
    if !kronrod.is_finite() {
        return Err(FracError::Quadrature(format!(
            "integrand is not finite on [{lo}, {hi}]"
        )));
    }
    Ok(Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Globally adaptive Gauss–Kronrod quadrature of `g` over `[lo, hi]`.
pub(crate) fn adaptive<T, G>(g: G, lo: T, hi: T, rel: T, abs: T) -> Result<Estimate<T>>
where
    T: Real,
    G: Fn(T) -> Result<T>,
{
    if hi == lo {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
        });
    }
    let mut panels = vec![gauss_kronrod(&g, lo, hi)?];
    loop {
        let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let target = abs.max(rel * value.abs());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(FracError::Quadrature(format!(
                "adaptive quadrature on [{lo}, {hi}] stalled at error {error:e} \
                 (target {target:e}) after {MAX_INTERVALS} intervals"
            )));
        }
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bi, be), (i, p)| {
                    if p.error > be {
                        (i, p.error)
                    } else {
                        (bi, be)
                    }
                });
        let panel = panels.swap_remove(worst);
        let mid = (panel.lo + panel.hi) * T::lit(0.5);
        if !(mid > panel.lo && mid < panel.hi) {
            return Err(FracError::Quadrature(format!(
                "adaptive quadrature exhausted floating-point resolution near {mid}"
            )));
        }
        panels.push(gauss_kronrod(&g, panel.lo, mid)?);
        panels.push(gauss_kronrod(&g, mid, panel.hi)?);
    }
}

/// Adaptive oracle for ∫_a^x g(t)(x−t)^p dt.
///
/// For p < 0 the panel `[x − h, x]` with h = (x−a)/2 is rewritten through
/// u = (x−t)^{p+1}, where the integrand becomes the bounded `g(x − u^{1/(p+1)})/(p+1)`.
pub(crate) fn oracle_kernel_integral<T, G>(
    g: G,
    a: T,
    x: T,
    p: T,
    rel: T,
    abs: T,
) -> Result<Estimate<T>>
where
    T: Real,
    G: Fn(T) -> Result<T>,
{
    let h = (x - a) * T::lit(0.5);
    let split = x - h;
    let half_abs = abs * T::lit(0.5);
    let regular = adaptive(|t| Ok(g(t)? * (x - t).powf(p)), a, split, rel, half_abs)?;
    let singular = if p < T::zero() {
        let mu = p + T::one();
        let inv = mu.recip();
        adaptive(
            |u: T| Ok(g(x - u.powf(inv))? * inv),
            T::zero(),
            h.powf(mu),
            rel,
            half_abs,
        )?
    } else {
        adaptive(|t| Ok(g(t)? * (x - t).powf(p)), split, x, rel, half_abs)?
    };
    Ok(Estimate {
        value: regular.value + singular.value,
        error: regular.error + singular.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_kronrod_is_exact_for_polynomials() {
        // Kronrod 21 integrates degree 31 exactly, the embedded Gauss 10 degree 19.
        for deg in [0_i32, 1, 5, 19] {
            let p = gauss_kronrod(&|t: f64| Ok(t.powi(deg)), 0.0, 1.0).unwrap();
            assert_relative_eq!(p.value, 1.0 / f64::from(deg + 1), max_relative = 1e-14);
            assert!(p.error < 1e-14, "degree {deg}: {}", p.error);
        }
        let p = gauss_kronrod(&|t: f64| Ok(t.powi(31)), 0.0, 1.0).unwrap();
        assert_relative_eq!(p.value, 1.0 / 32.0, max_relative = 1e-13);
    }

    #[test]
    fn moments_match_between_branches() {
        for p in [-0.9_f64, -0.5, 0.0, 0.3, 1.7] {
            for c in [4_usize, 7, 100] {
                let (g0, g1) = kernel_moments(p, c);
                let cf = c as f64;
                let j0 = ((cf + 1.0).powf(p + 1.0) - cf.powf(p + 1.0)) / (p + 1.0);
                let j1 = ((cf + 1.0).powf(p + 2.0) - cf.powf(p + 2.0)) / (p + 2.0) - cf * j0;
                assert_relative_eq!(g0, j0, max_relative = 1e-11);
                assert_relative_eq!(g1, j1, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn product_rule_converges_on_constant() {
        // ∫_0^1 (x−t)^p dt = 1/(p+1); the near half is smooth, the far half exact.
        let rule = ProductRule::new(-0.5_f64, 64);
        let s = rule.integrate(|_| Ok(1.0), 0.0, 1.0).unwrap();
        assert_relative_eq!(s.value, 2.0, max_relative = 1e-4);
        let fine = ProductRule::new(-0.5_f64, 4096)
            .integrate(|_| Ok(1.0), 0.0, 1.0)
            .unwrap();
        assert_relative_eq!(fine.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn derivative_form_matches_direct_form() {
        // ∫_0^1 f′(t)(1−t)^{-0.3} dt with f = sin.
        let f = crate::function::FnPair {
            value: |t: f64| Ok(t.sin()),
            derivative: |t: f64| Ok(t.cos()),
        };
        let rule = ProductRule::new(-0.3_f64, 4096);
        let by_parts = rule.integrate_derivative(&f, 0.0, 1.0).unwrap().value;
        let direct = rule.integrate(|t| Ok(t.cos()), 0.0, 1.0).unwrap().value;
        assert_relative_eq!(by_parts, direct, max_relative = 1e-8);
    }

    #[test]
    fn uniform_convolution_matches_closed_form() {
        // ∫_0^x t (x−t)^{-0.5} dt = (4/3) x^{1.5}; linear g is reproduced exactly.
        let h = 0.01;
        let g: Vec<f64> = (0..=100).map(|j| j as f64 * h).collect();
        let table = uniform_convolution(&g, -0.5, h);
        for (k, v) in table.iter().enumerate() {
            let x = k as f64 * h;
            assert!((v - 4.0 / 3.0 * x.powf(1.5)).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn oracle_handles_strong_singularity() {
        // ∫_0^1 (1−t)^{-0.99} dt = 100.
        let e = oracle_kernel_integral(|_| Ok(1.0_f64), 0.0, 1.0, -0.99, 1e-12, 1e-14).unwrap();
        assert_relative_eq!(e.value, 100.0, max_relative = 1e-11);
    }

    #[test]
    fn adaptive_reports_stall() {
        for (lo, hi) in [(-1.0, 1.0), (0.0, 1.0)] {
            let r = adaptive(|t: f64| Ok(1.0 / (t - 0.3).abs()), lo, hi, 1e-12, 1e-14);
            assert!(matches!(r, Err(FracError::Quadrature(_))), "{r:?}");
        }
    }
}
