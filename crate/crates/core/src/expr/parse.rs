use std::fmt;

use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the input; equals the input length at end of input.
    pub offset: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

const OPERAND: &[&str] = &["number", "x", "y", "(", "-", "function"];

fn err(offset: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((start, tok));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    return Err(err(j, "malformed exponent in numeric literal", &["digit"]));
                }
            }
            let literal = &text[start..i];
            let value: f64 = literal
                .parse()
                .map_err(|_| err(start, format!("invalid number `{literal}`"), &[]))?;
            if !value.is_finite() {
                return Err(err(start, format!("number `{literal}` is out of range"), &[]));
            }
            out.push((start, Tok::Num(value)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(err(start, format!("unknown character `{ch}`"), OPERAND));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    _text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinaryOp::Add,
                Some(Tok::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinaryOp::Mul,
                Some(Tok::Slash) => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            // unary minus binds looser than `^`
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::unary(UnaryOp::Neg, inner));
        }
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::pow(base, exponent));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        let Some(tok) = self.bump() else {
            return Err(err(offset, "unexpected end of input", OPERAND));
        };
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.close_paren(offset)?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var(Var::X)),
                "y" => Ok(Expr::Var(Var::Y)),
                "exp" | "ln" | "sqrt" | "abs" | "sin" | "cos" => {
                    let op = match name.as_str() {
                        "exp" => UnaryOp::Exp,
                        "ln" => UnaryOp::Ln,
                        "sqrt" => UnaryOp::Sqrt,
                        "abs" => UnaryOp::Abs,
                        "sin" => UnaryOp::Sin,
                        _ => UnaryOp::Cos,
                    };
                    let open = self.offset();
                    if self.bump() != Some(Tok::LParen) {
                        return Err(err(open, format!("`{name}` must be followed by `(`"), &["("]));
                    }
                    let arg = self.expr()?;
                    self.close_paren(open)?;
                    Ok(Expr::unary(op, arg))
                }
                _ => Err(err(offset, format!("unknown identifier `{name}`"), OPERAND)),
            },
            other => Err(err(
                offset,
                format!("unexpected {}", other.describe()),
                OPERAND,
            )),
        }
    }

    fn close_paren(&mut self, open: usize) -> Result<(), ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            Some(other) => Err(err(
                offset,
                format!("unexpected {} inside parenthesis opened at {open}", other.describe()),
                &[")", "operator"],
            )),
            None => Err(err(
                offset,
                format!("unbalanced parenthesis opened at {open}"),
                &[")"],
            )),
        }
    }
}

/// Parses an expression in `x` and `y`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        len: text.len(),
        _text: text,
    };
    let e = parser.expr()?;
    if let Some((offset, tok)) = parser.tokens.get(parser.pos) {
        let expected: &[&str] = if *tok == Tok::RParen {
            &["end of input"]
        } else {
            &["operator", "end of input"]
        };
        let message = if *tok == Tok::RParen {
            "unbalanced `)`".to_string()
        } else {
            format!("trailing input starting with {}", tok.describe())
        };
        return Err(err(*offset, message, expected));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_variables() {
        assert_eq!(
            parse("x*y").unwrap(),
            Expr::binary(BinaryOp::Mul, Expr::x(), Expr::y())
        );
    }

    #[test]
    fn product_of_differences() {
        let expected = Expr::binary(
            BinaryOp::Mul,
            Expr::binary(BinaryOp::Sub, Expr::x(), Expr::Const(1.0)),
            Expr::binary(BinaryOp::Sub, Expr::y(), Expr::Const(2.0)),
        );
        assert_eq!(parse("(x-1)*(y-2)").unwrap(), expected);
    }

    #[test]
    fn dangling_operator_reports_offset() {
        let e = parse("1/").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(e.expected.iter().any(|s| s == "number"));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let e = parse("2x").unwrap_err();
        assert_eq!(e.offset, 1);
    }

    #[test]
    fn rejects_unknown_tokens_and_parens() {
        assert_eq!(parse("x $ y").unwrap_err().offset, 2);
        assert_eq!(parse("z+1").unwrap_err().offset, 0);
        assert_eq!(parse("(x+1").unwrap_err().offset, 4);
        assert_eq!(parse("x+1)").unwrap_err().offset, 3);
        assert!(parse("sin x").is_err());
        assert!(parse("").is_err());
        assert!(parse("1e").is_err());
        assert!(parse("1e999").is_err());
    }

    #[test]
    fn numbers_with_fraction_and_exponent() {
        assert_eq!(parse("2.5e-1").unwrap(), Expr::Const(0.25));
        assert_eq!(parse("3.").unwrap(), Expr::Const(3.0));
        assert_eq!(parse("1E+2").unwrap(), Expr::Const(100.0));
    }
}
