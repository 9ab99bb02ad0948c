use super::ast::{BinOp, Func, Node};
use super::jet::{JetDomain, TaylorJet};
use crate::error::ExprError;
use crate::scalar::Real;

fn domain<T: Real>(node: &Node, at: T, reason: impl Into<String>) -> ExprError {
    ExprError::Domain {
        node: node.to_string(),
        at: at.as_f64(),
        reason: reason.into(),
    }
}

fn checked<T: Real>(node: &Node, at: T, value: T) -> Result<T, ExprError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(node, at, "non-finite result"))
    }
}

/// Integer value of a `t`-free exponent, if it is one.
fn integer_exponent(exponent: &Node) -> Option<i64> {
    if !exponent.is_constant() {
        return None;
    }
    let k = value_at::<f64>(exponent, 0.0).ok()?;
    (k.fract() == 0.0 && k.abs() <= i32::MAX as f64).then_some(k as i64)
}

pub(crate) fn value_at<T: Real>(node: &Node, t: T) -> Result<T, ExprError> {
    let v = match node {
        Node::Num(v) => T::lit(*v),
        Node::Const(c) => T::lit(c.value()),
        Node::Var => t,
        Node::Neg(inner) => -value_at(inner, t)?,
        Node::Binary(op, l, r) => {
            if *op == BinOp::Pow {
                return pow_value(node, l, r, t);
            }
            let a = value_at(l, t)?;
            let b = value_at(r, t)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == T::zero() {
                        return Err(domain(node, t, "division by zero"));
                    }
                    a / b
                }
                BinOp::Pow => unreachable!(),
            }
        }
        Node::Call(func, arg) => {
            let u = value_at(arg, t)?;
            match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Exp => u.exp(),
                Func::Log => {
                    if !(u > T::zero()) {
                        return Err(domain(node, t, "log of a non-positive value"));
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u < T::zero() {
                        return Err(domain(node, t, "sqrt of a negative value"));
                    }
                    u.sqrt()
                }
                Func::Abs => u.abs(),
            }
        }
    };
    checked(node, t, v)
}

fn pow_value<T: Real>(node: &Node, base: &Node, exponent: &Node, t: T) -> Result<T, ExprError> {
    let u = value_at(base, t)?;
    if let Some(k) = integer_exponent(exponent) {
        if u == T::zero() && k < 0 {
            return Err(domain(node, t, "division by zero"));
        }
        return checked(node, t, u.powi(k as i32));
    }
    let v = value_at(exponent, t)?;
    if u < T::zero() {
        return Err(domain(node, t, "non-integer power of a negative base"));
    }
    if u == T::zero() && v < T::zero() {
        return Err(domain(node, t, "division by zero"));
    }
    checked(node, t, u.powf(v))
}

/// Value and first derivative in one pass (forward-mode dual numbers).
pub(crate) fn dual_at<T: Real>(node: &Node, t: T) -> Result<(T, T), ExprError> {
    let (v, d) = match node {
        Node::Num(v) => (T::lit(*v), T::zero()),
        Node::Const(c) => (T::lit(c.value()), T::zero()),
        Node::Var => (t, T::one()),
        Node::Neg(inner) => {
            let (v, d) = dual_at(inner, t)?;
            (-v, -d)
        }
        Node::Binary(op, l, r) => {
            if *op == BinOp::Pow {
                return pow_dual(node, l, r, t);
            }
            let (a, da) = dual_at(l, t)?;
            let (b, db) = dual_at(r, t)?;
            match op {
                BinOp::Add => (a + b, da + db),
                BinOp::Sub => (a - b, da - db),
                BinOp::Mul => (a * b, da * b + a * db),
                BinOp::Div => {
                    if b == T::zero() {
                        return Err(domain(node, t, "division by zero"));
                    }
                    let q = a / b;
                    (q, (da - q * db) / b)
                }
                BinOp::Pow => unreachable!(),
            }
        }
        Node::Call(func, arg) => {
            let (u, du) = dual_at(arg, t)?;
            match func {
                Func::Sin => (u.sin(), u.cos() * du),
                Func::Cos => (u.cos(), -u.sin() * du),
                Func::Exp => {
                    let e = u.exp();
                    (e, e * du)
                }
                Func::Log => {
                    if !(u > T::zero()) {
                        return Err(domain(node, t, JetDomain::LogNonPositive.describe()));
                    }
                    (u.ln(), du / u)
                }
                Func::Sqrt => {
                    if !(u > T::zero()) {
                        return Err(domain(node, t, JetDomain::SqrtNonPositive.describe()));
                    }
                    let r = u.sqrt();
                    (r, du / (r + r))
                }
                Func::Abs => {
                    if u == T::zero() {
                        return Err(domain(node, t, JetDomain::AbsAtZero.describe()));
                    }
                    (u.abs(), u.signum() * du)
                }
            }
        }
    };
    Ok((checked(node, t, v)?, checked(node, t, d)?))
}

fn pow_dual<T: Real>(node: &Node, base: &Node, exponent: &Node, t: T) -> Result<(T, T), ExprError> {
    let (u, du) = dual_at(base, t)?;
    if let Some(k) = integer_exponent(exponent) {
        if u == T::zero() && k < 0 {
            return Err(domain(node, t, "division by zero"));
        }
        let v = u.powi(k as i32);
        let d = if k == 0 {
            T::zero()
        } else {
            T::lit(k as f64) * u.powi((k - 1) as i32) * du
        };
        return Ok((checked(node, t, v)?, checked(node, t, d)?));
    }
    if !(u > T::zero()) {
        return Err(domain(node, t, JetDomain::PowNonPositiveBase.describe()));
    }
    let (v, dv) = dual_at(exponent, t)?;
    let p = u.powf(v);
    let d = p * (dv * u.ln() + v * du / u);
    Ok((checked(node, t, p)?, checked(node, t, d)?))
}

pub(crate) fn jet_at<T: Real>(
    node: &Node,
    center: T,
    order: usize,
) -> Result<TaylorJet<T>, ExprError> {
    let lift =
        |r: Result<TaylorJet<T>, JetDomain>| r.map_err(|e| domain(node, center, e.describe()));
    let jet = match node {
        Node::Num(v) => TaylorJet::constant(center, T::lit(*v), order),
        Node::Const(c) => TaylorJet::constant(center, T::lit(c.value()), order),
        Node::Var => TaylorJet::variable(center, order),
        Node::Neg(inner) => jet_at(inner, center, order)?.neg(),
        Node::Binary(op, l, r) => {
            let a = jet_at(l, center, order)?;
            match op {
                BinOp::Pow => match integer_exponent(r) {
                    Some(k) => lift(a.powi(k))?,
                    None => lift(a.pow(&jet_at(r, center, order)?))?,
                },
                _ => {
                    let b = jet_at(r, center, order)?;
                    match op {
                        BinOp::Add => a.add(&b),
                        BinOp::Sub => a.sub(&b),
                        BinOp::Mul => a.mul(&b),
                        BinOp::Div => lift(a.div(&b))?,
                        BinOp::Pow => unreachable!(),
                    }
                }
            }
        }
        Node::Call(func, arg) => {
            let u = jet_at(arg, center, order)?;
            match func {
                Func::Sin => u.sin_cos().0,
                Func::Cos => u.sin_cos().1,
                Func::Exp => u.exp(),
                Func::Log => lift(u.ln())?,
                Func::Sqrt => lift(u.sqrt())?,
                Func::Abs => lift(u.abs())?,
            }
        }
    };
    if jet.all_finite() {
        Ok(jet)
    } else {
        Err(domain(node, center, "non-finite Taylor coefficient"))
    }
}
