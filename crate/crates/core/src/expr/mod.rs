//! One-variable expressions: parsing, evaluation and Taylor-mode derivatives.

mod ast;
mod eval;
mod jet;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use ast::{BinOp, Constant, Func, Node};
pub use jet::{JetDomain, TaylorJet};

use crate::error::ExprError;
use crate::scalar::Real;

/// A parsed scalar function of the variable `t`.
///
/// Immutable after construction; evaluation is a pure tree walk, so an
/// `Expression` can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        parse::parse_node(source).map(|root| Self { root })
    }

    pub fn from_node(root: Node) -> Self {
        Self { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates at `t`; out-of-domain inputs and non-finite results are errors.
    pub fn eval<T: Real>(&self, t: T) -> Result<T, ExprError> {
        eval::value_at(&self.root, t)
    }

    /// Value and first derivative at `t`.
    pub fn eval_with_derivative<T: Real>(&self, t: T) -> Result<(T, T), ExprError> {
        eval::dual_at(&self.root, t)
    }

    /// Taylor jet of order `n` at `center`: entry j is `f^(j)(center)/j!`.
    pub fn derivatives<T: Real>(&self, center: T, n: usize) -> Result<TaylorJet<T>, ExprError> {
        eval::jet_at(&self.root, center, n)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for Expression {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

pub fn parse(source: &str) -> Result<Expression, ExprError> {
    Expression::parse(source)
}
