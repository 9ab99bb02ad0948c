//! Numerical fractional calculus: Riemann–Liouville and Caputo operators,
//! fractional mean values, fractional critical points and shape analysis
//! under the δ-increasing order.
//!
//! Every numerical routine is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// Negated comparisons are how NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod critical;
pub mod error;
pub mod expr;
pub mod fracops;
pub mod function;
pub mod meanval;
mod quad;
pub mod roots;
pub mod scalar;
pub mod shape;
pub mod special;

pub use config::Tolerances;
pub use critical::{
    alpha_grid, clip_alpha, critical_points, dilation_scenario, lemma31_check, r_alpha_curve,
    theorem32_xi, CriticalPointReport, DilationReport, FractionalZero, Lemma31Check, RAlphaCurve,
    RAlphaSample,
};
pub use error::{ExprError, FracError, Result};
pub use expr::{Expression, TaylorJet};
pub use fracops::{
    caputo_derivative, composition_check, f_lower, gamma, integral_of_order, rl_derivative,
    rl_derivative_any_base, rl_integral, windowed_derivative, windowed_derivative_with, Backend,
    CompositionCheck, DerivativeMethod, FractionalParams, OperatorValue, WindowConvention,
    WindowSpec,
};
pub use function::{Derivative, FnPair, FnValue, NthDerivative, ScalarFn, Shifted};
pub use meanval::{
    mean_value, mean_value_polynomial, prop27_witness, xi_smoothness_profile, MeanValueResult,
    PolynomialEstimate, XiProfilePoint,
};
pub use roots::Root;
pub use scalar::Real;
pub use shape::{
    comparison_check, convexity_equivalence, delta_increasing_check, monotonicity_certificate,
    periodicity_defect, property_p_check, reconstruct_difference, sample_pairs, ConvexityReport,
    MonotonicityReport, Outcome, Reconstruction, ShapeProperty, ShapeVerdict, WindowPairSample,
    Witness,
};

pub type Params = FractionalParams<f64>;
pub type Value = OperatorValue<f64>;
pub type Window = WindowSpec<f64>;
pub type Jet = TaylorJet<f64>;
pub type MeanValue = MeanValueResult<f64>;

pub type ParamsF32 = FractionalParams<f32>;
pub type ValueF32 = OperatorValue<f32>;
