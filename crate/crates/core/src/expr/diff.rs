use super::{BinaryOp, Expr, UnaryOp};

use BinaryOp::*;
use UnaryOp::*;

fn un(op: UnaryOp, e: Expr) -> Expr {
    Expr::unary(op, e)
}

fn bin(op: BinaryOp, l: Expr, r: Expr) -> Expr {
    Expr::binary(op, l, r)
}

pub(super) fn derivative(e: &Expr, var: super::Var) -> Expr {
    match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var(v) => Expr::Const(if *v == var { 1.0 } else { 0.0 }),
        Expr::Unary(op, u) => {
            let du = derivative(u, var);
            let u = (**u).clone();
            match op {
                Neg => un(Neg, du),
                Exp => bin(Mul, un(Exp, u), du),
                Ln => bin(Div, du, u),
                Sqrt => bin(Div, du, bin(Mul, Expr::Const(2.0), un(Sqrt, u))),
                // sign(u) * u', with sign(0) = 0
                Abs => bin(Mul, un(Sign, u), du),
                Sin => bin(Mul, un(Cos, u), du),
                Cos => un(Neg, bin(Mul, un(Sin, u), du)),
                // piecewise constant
                Sign => Expr::Const(0.0),
            }
        }
        Expr::Binary(op, l, r) => {
            let (lv, rv) = ((**l).clone(), (**r).clone());
            match op {
                Add => bin(Add, derivative(l, var), derivative(r, var)),
                Sub => bin(Sub, derivative(l, var), derivative(r, var)),
                Mul => bin(
                    Add,
                    bin(Mul, derivative(l, var), rv),
                    bin(Mul, lv, derivative(r, var)),
                ),
                Div => bin(
                    Div,
                    bin(
                        Sub,
                        bin(Mul, derivative(l, var), rv.clone()),
                        bin(Mul, lv, derivative(r, var)),
                    ),
                    bin(Mul, rv.clone(), rv),
                ),
                Pow => match r.constant_value() {
                    Some(k) => bin(
                        Mul,
                        bin(
                            Mul,
                            Expr::Const(k),
                            bin(Pow, lv, Expr::Const(k - 1.0)),
                        ),
                        derivative(l, var),
                    ),
                    None if !(r.contains(super::Var::X) || r.contains(super::Var::Y)) => bin(
                        Mul,
                        bin(
                            Mul,
                            rv.clone(),
                            bin(Pow, lv, bin(Sub, rv, Expr::Const(1.0))),
                        ),
                        derivative(l, var),
                    ),
                    // Only reachable for hand-built trees; go through exp/ln.
                    None => derivative(&Expr::pow(lv, rv), var),
                },
            }
        }
    }
}
