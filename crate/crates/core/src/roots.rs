//! Sign-scan bracketing and bisection.

use rayon::prelude::*;

use crate::error::{FracError, Result};
use crate::scalar::Real;

/// A bracketed root with the residual of the reported point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub residual: T,
    pub bracket: (T, T),
}

/// `n + 1` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_count(n.max(1));
    (0..=n)
        .map(|k| {
            if k == n {
                hi
            } else {
                lo + T::from_count(k) * step
            }
        })
        .collect()
}

/// Evaluates `h` on every node, in parallel, preserving order.
pub(crate) fn sample<T, H>(h: &H, nodes: &[T]) -> Result<Vec<T>>
where
    T: Real,
    H: Fn(T) -> Result<T> + Sync,
{
    nodes.par_iter().map(|&t| h(t)).collect()
}

/// Bisects a sign change of `h` on `[lo, hi]` down to `width`.
///
/// Returns whichever final endpoint has the smaller |h|.
pub(crate) fn bisect<T, H>(
    h: &H,
    mut lo: T,
    mut hi: T,
    mut h_lo: T,
    mut h_hi: T,
    width: T,
) -> Result<Root<T>>
where
    T: Real,
    H: Fn(T) -> Result<T>,
{
    if h_lo == T::zero() {
        return Ok(Root {
            x: lo,
            residual: T::zero(),
            bracket: (lo, lo),
        });
    }
    if h_hi == T::zero() {
        return Ok(Root {
            x: hi,
            residual: T::zero(),
            bracket: (hi, hi),
        });
    }
    if h_lo.signum() == h_hi.signum() {
        return Err(FracError::Solver(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..256 {
        if hi - lo <= width {
            break;
        }
        let mid = lo + (hi - lo) * T::lit(0.5);
        if !(mid > lo && mid < hi) {
            break;
        }
        let h_mid = h(mid)?;
        if h_mid == T::zero() {
            return Ok(Root {
                x: mid,
                residual: T::zero(),
                bracket: (lo, hi),
            });
        }
        if h_mid.signum() == h_lo.signum() {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
            h_hi = h_mid;
        }
    }
    let (x, residual) = if h_lo.abs() <= h_hi.abs() {
        (lo, h_lo.abs())
    } else {
        (hi, h_hi.abs())
    };
    Ok(Root {
        x,
        residual,
        bracket: (lo, hi),
    })
}

/// All sign changes of `h` across consecutive scan nodes, refined by bisection.
///
/// Exact zeros at nodes are reported once. Tangential roots that do not
/// change sign between nodes are invisible to the scan.
pub(crate) fn roots_from_scan<T, H>(
    h: &H,
    nodes: &[T],
    values: &[T],
    width: T,
) -> Result<Vec<Root<T>>>
where
    T: Real,
    H: Fn(T) -> Result<T> + Sync,
{
    let mut brackets = Vec::new();
    for k in 0..nodes.len() {
        if values[k] == T::zero() {
            brackets.push((k, k));
        } else if k + 1 < nodes.len()
            && values[k + 1] != T::zero()
            && values[k].signum() != values[k + 1].signum()
        {
            brackets.push((k, k + 1));
        }
    }
    brackets
        .into_par_iter()
        .map(|(i, j)| {
            if i == j {
                Ok(Root {
                    x: nodes[i],
                    residual: T::zero(),
                    bracket: (nodes[i], nodes[i]),
                })
            } else {
                bisect(h, nodes[i], nodes[j], values[i], values[j], width)
            }
        })
        .collect()
}
