use super::{power, sign, BinaryOp, DomainError, Expr, UnaryOp, Var};

#[derive(Debug, Clone, Copy)]
enum Instr {
    Const(f64),
    X,
    Y,
    Unary(UnaryOp),
    Binary(BinaryOp),
}

/// An [`Expr`] flattened to postfix form for repeated evaluation.
///
/// Produces bit-identical values to [`Expr::eval`]. On a domain failure the
/// tree is re-evaluated to recover the offending node.
#[derive(Debug, Clone)]
pub struct Program {
    code: Vec<Instr>,
    depth: usize,
    source: Expr,
}

const SMALL_STACK: usize = 8;
const INLINE_STACK: usize = 64;

impl Program {
    pub fn new(e: &Expr) -> Self {
        let mut code = Vec::with_capacity(e.size());
        let mut depth = 0;
        emit(e, &mut code, 0, &mut depth);
        Program {
            code,
            depth,
            source: e.clone(),
        }
    }

    pub fn source(&self) -> &Expr {
        &self.source
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64, DomainError> {
        let fast = if self.depth <= SMALL_STACK {
            let mut stack = [0.0; SMALL_STACK];
            self.run(x, y, &mut stack)
        } else if self.depth <= INLINE_STACK {
            let mut stack = [0.0; INLINE_STACK];
            self.run(x, y, &mut stack)
        } else {
            let mut stack = vec![0.0; self.depth];
            self.run(x, y, &mut stack)
        };
        match fast {
            Some(v) => Ok(v),
            None => Err(self
                .source
                .eval(x, y)
                .err()
                .expect("postfix and tree evaluation disagree on domain")),
        }
    }

    fn run(&self, x: f64, y: f64, stack: &mut [f64]) -> Option<f64> {
        let mut sp = 0;
        for instr in &self.code {
            match *instr {
                Instr::Const(c) => {
                    stack[sp] = c;
                    sp += 1;
                }
                Instr::X => {
                    stack[sp] = x;
                    sp += 1;
                }
                Instr::Y => {
                    stack[sp] = y;
                    sp += 1;
                }
                Instr::Unary(op) => {
                    let u = stack[sp - 1];
                    stack[sp - 1] = match op {
                        UnaryOp::Neg => -u,
                        UnaryOp::Exp => {
                            let v = u.exp();
                            if v.is_infinite() {
                                return None;
                            }
                            v
                        }
                        UnaryOp::Ln => {
                            if u <= 0.0 {
                                return None;
                            }
                            u.ln()
                        }
                        UnaryOp::Sqrt => {
                            if u < 0.0 {
                                return None;
                            }
                            u.sqrt()
                        }
                        UnaryOp::Abs => u.abs(),
                        UnaryOp::Sin => u.sin(),
                        UnaryOp::Cos => u.cos(),
                        UnaryOp::Sign => sign(u),
                    };
                }
                Instr::Binary(op) => {
                    sp -= 1;
                    let r = stack[sp];
                    let l = stack[sp - 1];
                    stack[sp - 1] = match op {
                        BinaryOp::Add => l + r,
                        BinaryOp::Sub => l - r,
                        BinaryOp::Mul => l * r,
                        BinaryOp::Div => {
                            if r == 0.0 {
                                return None;
                            }
                            l / r
                        }
                        BinaryOp::Pow => power(l, r).ok()?,
                    };
                }
            }
        }
        Some(stack[0])
    }
}

/// Evaluates a [`Program`] at many points at once, one instruction across
/// all points at a time. Values are bit-identical to [`Program::eval`].
pub struct Batch<'a> {
    program: &'a Program,
    scratch: Vec<f64>,
}

impl Program {
    pub fn batch(&self) -> Batch<'_> {
        Batch {
            program: self,
            scratch: Vec::new(),
        }
    }
}

impl Batch<'_> {
    /// Writes `f(xs[i], ys[i])` to `out[i]`. On a domain failure the error
    /// of the first failing point is returned and `out` is unspecified.
    pub fn eval(&mut self, xs: &[f64], ys: &[f64], out: &mut [f64]) -> Result<(), DomainError> {
        let n = xs.len();
        assert!(ys.len() == n && out.len() == n, "batch slices differ in length");
        if n == 0 {
            return Ok(());
        }
        self.scratch.resize(self.program.depth * n, 0.0);
        if run_batch(&self.program.code, xs, ys, &mut self.scratch, n) {
            out.copy_from_slice(&self.scratch[..n]);
            return Ok(());
        }
        for i in 0..n {
            out[i] = self.program.eval(xs[i], ys[i])?;
        }
        Ok(())
    }
}

fn run_batch(code: &[Instr], xs: &[f64], ys: &[f64], stack: &mut [f64], n: usize) -> bool {
    let mut sp = 0;
    let mut ok = true;
    for instr in code {
        match *instr {
            Instr::Const(c) => {
                stack[sp * n..(sp + 1) * n].fill(c);
                sp += 1;
            }
            Instr::X => {
                stack[sp * n..(sp + 1) * n].copy_from_slice(xs);
                sp += 1;
            }
            Instr::Y => {
                stack[sp * n..(sp + 1) * n].copy_from_slice(ys);
                sp += 1;
            }
            Instr::Unary(op) => {
                let top = &mut stack[(sp - 1) * n..sp * n];
                match op {
                    UnaryOp::Neg => top.iter_mut().for_each(|u| *u = -*u),
                    UnaryOp::Exp => top.iter_mut().for_each(|u| {
                        *u = u.exp();
                        ok &= u.is_finite() || u.is_nan();
                    }),
                    UnaryOp::Ln => top.iter_mut().for_each(|u| {
                        ok &= *u > 0.0 || u.is_nan();
                        *u = u.ln();
                    }),
                    UnaryOp::Sqrt => top.iter_mut().for_each(|u| {
                        ok &= *u >= 0.0 || u.is_nan();
                        *u = u.sqrt();
                    }),
                    UnaryOp::Abs => top.iter_mut().for_each(|u| *u = u.abs()),
                    UnaryOp::Sin => top.iter_mut().for_each(|u| *u = u.sin()),
                    UnaryOp::Cos => top.iter_mut().for_each(|u| *u = u.cos()),
                    UnaryOp::Sign => top.iter_mut().for_each(|u| *u = sign(*u)),
                }
            }
            Instr::Binary(op) => {
                sp -= 1;
                let (low, high) = stack.split_at_mut(sp * n);
                let lhs = &mut low[(sp - 1) * n..];
                let rhs = &high[..n];
                let lanes = lhs.iter_mut().zip(rhs);
                match op {
                    BinaryOp::Add => lanes.for_each(|(l, r)| *l += r),
                    BinaryOp::Sub => lanes.for_each(|(l, r)| *l -= r),
                    BinaryOp::Mul => lanes.for_each(|(l, r)| *l *= r),
                    BinaryOp::Div => lanes.for_each(|(l, r)| {
                        ok &= *r != 0.0;
                        *l /= r;
                    }),
                    BinaryOp::Pow => lanes.for_each(|(l, r)| match power(*l, *r) {
                        Ok(v) => *l = v,
                        Err(_) => ok = false,
                    }),
                }
            }
        }
        if !ok {
            return false;
        }
    }
    true
}

fn emit(e: &Expr, code: &mut Vec<Instr>, height: usize, depth: &mut usize) {
    *depth = (*depth).max(height + 1);
    match e {
        Expr::Const(c) => code.push(Instr::Const(*c)),
        Expr::Var(Var::X) => code.push(Instr::X),
        Expr::Var(Var::Y) => code.push(Instr::Y),
        Expr::Unary(op, u) => {
            emit(u, code, height, depth);
            code.push(Instr::Unary(*op));
        }
        Expr::Binary(op, l, r) => {
            emit(l, code, height, depth);
            emit(r, code, height + 1, depth);
            code.push(Instr::Binary(*op));
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    #[test]
    fn matches_tree_evaluation() {
        for s in ["x*y", "exp(x)/(1+y^2)", "-(x-1)*(y-2)^3", "sqrt(abs(x-y))"] {
            let e = parse(s).unwrap();
            let p = e.compile();
            for (x, y) in [(1.0, 2.0), (0.3, 4.5), (2.0, 2.0)] {
                assert_eq!(
                    p.eval(x, y).unwrap().to_bits(),
                    e.eval(x, y).unwrap().to_bits()
                );
            }
        }
    }

    #[test]
    fn recovers_domain_error_node() {
        let e = parse("x + ln(y - 1)").unwrap();
        let err = e.compile().eval(1.0, 1.0).unwrap_err();
        assert_eq!(err.node, "ln(y-1.0)");
    }

    #[test]
    fn batch_matches_scalar() {
        for s in ["x*y", "exp(x)/(1+y^2)", "-(x-1)*(y-2)^3", "sqrt(abs(x-y))", "x^y"] {
            let e = parse(s).unwrap();
            let p = e.compile();
            let xs: Vec<f64> = (0..37).map(|i| 0.2 + 0.1 * i as f64).collect();
            let ys: Vec<f64> = xs.iter().map(|x| 4.0 - x).collect();
            let mut out = vec![0.0; xs.len()];
            p.batch().eval(&xs, &ys, &mut out).unwrap();
            for i in 0..xs.len() {
                assert_eq!(out[i].to_bits(), p.eval(xs[i], ys[i]).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn batch_reports_first_failing_point() {
        let p = parse("ln(x-1)").unwrap().compile();
        let mut out = [0.0; 3];
        let err = p.batch().eval(&[2.0, 0.5, 0.0], &[0.0; 3], &mut out).unwrap_err();
        assert_eq!(err.x, 0.5);
    }

    #[test]
    fn deep_trees_use_heap_stack() {
        let mut s = String::from("x");
        for _ in 0..80 {
            s = format!("1+({s})*y");
        }
        // right-nested so the operand stack grows
        let mut r = String::from("x");
        for _ in 0..80 {
            r = format!("y-({r})");
        }
        for text in [s, r] {
            let e = parse(&text).unwrap();
            assert_eq!(e.compile().eval(0.5, 0.25).unwrap(), e.eval(0.5, 0.25).unwrap());
        }
    }
}
