//! Bivariate expressions `f(x, y)`: syntax tree, evaluation, printing and
//! symbolic differentiation.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := "-" factor | base ("^" factor)? ;
//! base   := NUMBER | "x" | "y" | "(" expr ")" | FUNC "(" expr ")" ;
//! FUNC   := "exp" | "ln" | "sqrt" | "abs" | "sin" | "cos" ;
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`.

mod diff;
mod parse;
mod program;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse, ParseError};
pub use program::{Batch, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Sin,
    Cos,
    /// `sign(u)` with `sign(0) = 0`. Only produced by differentiating `abs`;
    /// not part of the input grammar.
    Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Syntax tree of a real function of `x` and `y`.
///
/// `Binary(Pow, base, exponent)` only ever carries an exponent free of `x`
/// and `y`; powers with a variable exponent are stored as
/// `exp(exponent * ln(base))`. Use [`Expr::pow`] to build powers.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

/// Evaluation outside the natural domain of a node.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{reason} in `{node}` at (x, y) = ({x}, {y})")]
pub struct DomainError {
    /// The offending sub-expression, printed.
    pub node: String,
    pub reason: String,
    pub x: f64,
    pub y: f64,
}

impl Expr {
    pub fn x() -> Self {
        Expr::Var(Var::X)
    }

    pub fn y() -> Self {
        Expr::Var(Var::Y)
    }

    pub fn constant(value: f64) -> Self {
        Expr::Const(value)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Self {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// `base ^ exponent`, rewritten to `exp(exponent * ln(base))` when the
    /// exponent depends on `x` or `y`.
    pub fn pow(base: Expr, exponent: Expr) -> Self {
        if !(exponent.contains(Var::X) || exponent.contains(Var::Y)) {
            Expr::binary(BinaryOp::Pow, base, exponent)
        } else {
            let log = Expr::unary(UnaryOp::Ln, base);
            Expr::unary(UnaryOp::Exp, Expr::binary(BinaryOp::Mul, exponent, log))
        }
    }

    /// Value of a literal or a chain of negated literals.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::Unary(UnaryOp::Neg, inner) => inner.constant_value().map(|c| -c),
            _ => None,
        }
    }

    pub fn contains(&self, var: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Unary(_, e) => e.contains(var),
            Expr::Binary(_, l, r) => l.contains(var) || r.contains(var),
        }
    }

    pub fn contains_abs(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Unary(UnaryOp::Abs, _) => true,
            Expr::Unary(_, e) => e.contains_abs(),
            Expr::Binary(_, l, r) => l.contains_abs() || r.contains_abs(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, e) => 1 + e.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Evaluates the tree in IEEE-754 double precision.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, DomainError> {
        let fail = |node: &Expr, reason: &str| DomainError {
            node: node.to_string(),
            reason: reason.to_string(),
            x,
            y,
        };
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Unary(op, child) => {
                let u = child.eval(x, y)?;
                match op {
                    UnaryOp::Neg => -u,
                    UnaryOp::Exp => {
                        let v = u.exp();
                        if v.is_infinite() {
                            return Err(fail(self, "exp overflow"));
                        }
                        v
                    }
                    UnaryOp::Ln => {
                        if u <= 0.0 {
                            return Err(fail(self, "logarithm of a non-positive value"));
                        }
                        u.ln()
                    }
                    UnaryOp::Sqrt => {
                        if u < 0.0 {
                            return Err(fail(self, "square root of a negative value"));
                        }
                        u.sqrt()
                    }
                    UnaryOp::Abs => u.abs(),
                    UnaryOp::Sin => u.sin(),
                    UnaryOp::Cos => u.cos(),
                    UnaryOp::Sign => sign(u),
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(x, y)?;
                match op {
                    BinaryOp::Add => l + rhs.eval(x, y)?,
                    BinaryOp::Sub => l - rhs.eval(x, y)?,
                    BinaryOp::Mul => l * rhs.eval(x, y)?,
                    BinaryOp::Div => {
                        let r = rhs.eval(x, y)?;
                        if r == 0.0 {
                            return Err(fail(self, "division by zero"));
                        }
                        l / r
                    }
                    BinaryOp::Pow => {
                        let k = rhs.eval(x, y)?;
                        power(l, k).map_err(|reason| fail(self, reason))?
                    }
                }
            }
        };
        Ok(value)
    }

    /// Symbolic partial derivative by structural rules; no simplification.
    pub fn differentiate(&self, var: Var) -> Expr {
        diff::derivative(self, var)
    }

    /// `d^2 f / dx dy`, differentiating in `x` first.
    pub fn mixed_partial(&self) -> Expr {
        self.differentiate(Var::X).differentiate(Var::Y)
    }

    pub fn compile(&self) -> Program {
        Program::new(self)
    }
}

pub(crate) fn sign(u: f64) -> f64 {
    if u > 0.0 {
        1.0
    } else if u < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `base ^ k` with integer exponents evaluated by repeated multiplication.
pub(crate) fn power(base: f64, k: f64) -> Result<f64, &'static str> {
    let value = if k.fract() == 0.0 && k.abs() <= i32::MAX as f64 {
        if base == 0.0 && k < 0.0 {
            return Err("division by zero");
        }
        base.powi(k as i32)
    } else {
        if base < 0.0 {
            return Err("non-integer power of a negative value");
        }
        if base == 0.0 && k < 0.0 {
            return Err("division by zero");
        }
        base.powf(k)
    };
    if value.is_infinite() {
        return Err("power overflow");
    }
    Ok(value)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// Printing uses the minimum parentheses needed for `parse` to rebuild the same
// tree. Levels: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => 3,
            Expr::Const(_) | Expr::Var(_) => 5,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Unary(..) => 5,
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Binary(BinaryOp::Pow, ..) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(f, "-{:?}", -c)
                } else {
                    write!(f, "{c:?}")
                }
            }
            Expr::Var(Var::X) => write!(f, "x"),
            Expr::Var(Var::Y) => write!(f, "y"),
            Expr::Unary(UnaryOp::Neg, e) => {
                write!(f, "-")?;
                e.write_at(f, 3)
            }
            Expr::Unary(op, e) => {
                let name = match op {
                    UnaryOp::Exp => "exp",
                    UnaryOp::Ln => "ln",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Abs => "abs",
                    UnaryOp::Sin => "sin",
                    UnaryOp::Cos => "cos",
                    UnaryOp::Sign => "sign",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}(")?;
                e.write_at(f, 0)?;
                write!(f, ")")
            }
            Expr::Binary(op, l, r) => {
                let (symbol, left_min, right_min) = match op {
                    BinaryOp::Add => ("+", 1, 2),
                    BinaryOp::Sub => ("-", 1, 2),
                    BinaryOp::Mul => ("*", 2, 3),
                    BinaryOp::Div => ("/", 2, 3),
                    BinaryOp::Pow => ("^", 5, 3),
                };
                l.write_at(f, left_min)?;
                write!(f, "{symbol}")?;
                r.write_at(f, right_min)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn evaluates_small_examples() {
        assert_eq!(p("x*y").eval(2.0, 3.0).unwrap(), 6.0);
        assert_eq!(p("(x-1)*(y-2)").eval(4.0, 3.0).unwrap(), 3.0);
        assert_eq!(p("1/(x*y)").eval(2.0, 4.0).unwrap(), 0.125);
    }

    #[test]
    fn precedence_of_power_and_negation() {
        assert_eq!(p("-x^2").eval(3.0, 0.0).unwrap(), -9.0);
        assert_eq!(p("2^3^2").eval(0.0, 0.0).unwrap(), 512.0);
        assert_eq!(p("x^-2").eval(2.0, 0.0).unwrap(), 0.25);
        assert_eq!(p("1-2-3").eval(0.0, 0.0).unwrap(), -4.0);
        assert_eq!(p("8/4/2").eval(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(p("-2*x").eval(1.5, 0.0).unwrap(), -3.0);
    }

    #[test]
    fn integer_powers_accept_negative_bases() {
        assert_eq!(p("x^3").eval(-2.0, 0.0).unwrap(), -8.0);
        assert!(p("x^0.5").eval(-2.0, 0.0).is_err());
    }

    #[test]
    fn variable_exponent_becomes_exp_ln() {
        let e = p("x^y");
        assert!(matches!(e, Expr::Unary(UnaryOp::Exp, _)));
        assert!((e.eval(2.0, 3.0).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn domain_errors_name_the_node() {
        let err = p("ln(x-1)").eval(1.0, 1.0).unwrap_err();
        assert_eq!(err.node, "ln(x-1.0)");
        let err = p("y/(x-2)").eval(2.0, 1.0).unwrap_err();
        assert!(err.reason.contains("division by zero"));
        assert!(p("sqrt(x-3)").eval(1.0, 1.0).is_err());
    }

    #[test]
    fn display_reparses_to_the_same_tree() {
        for s in [
            "x*y",
            "(x-1)*(y-2)",
            "-x^2",
            "(-x)^2",
            "x-(y-1)",
            "x/(y*2)",
            "2^3^2",
            "(2^3)^2",
            "exp(x+y)*sin(-y)",
            "x^-2.5",
            "--x",
            "1e-3*abs(x-y)",
        ] {
            let e = p(s);
            let printed = e.to_string();
            assert_eq!(p(&printed), e, "{s} printed as {printed}");
        }
    }

    #[test]
    fn univariate_detection() {
        let e = p("x^2+1");
        assert!(e.contains(Var::X));
        assert!(!e.contains(Var::Y));
    }
}
