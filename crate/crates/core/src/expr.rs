//! A small expression language for metric/function/warp specifications:
//! variables y1..y4 and x, literals, + - * / ^, sin cos exp log, pi.
//!
//! Precedence: ^ (right-assoc) > unary minus > * / > + -, with left
//! associativity for binary - and /. Errors carry byte offsets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{exp_series, log_series, sin_cos_series, PowerLogSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// y1..y4 as Var(0..=3); the collar variable x as Var(4).
    Var(usize),
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

pub const X_VAR: usize = 4;

/// Evaluation point: spatial coordinates y1..y4 plus the collar variable x.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalPoint {
    pub y: [f64; 4],
    pub x: f64,
}

impl EvalPoint {
    pub fn spatial(y: &[f64]) -> Self {
        let mut p = EvalPoint::default();
        p.y[..y.len()].copy_from_slice(y);
        p
    }
}

impl Expr {
    pub fn eval(&self, p: &EvalPoint) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => {
                if *i == X_VAR {
                    p.x
                } else {
                    p.y[*i]
                }
            }
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(a) => -a.eval(p),
            Expr::Add(a, b) => a.eval(p) + b.eval(p),
            Expr::Sub(a, b) => a.eval(p) - b.eval(p),
            Expr::Mul(a, b) => a.eval(p) * b.eval(p),
            Expr::Div(a, b) => a.eval(p) / b.eval(p),
            Expr::Pow(a, b) => a.eval(p).powf(b.eval(p)),
            Expr::Call(f, a) => {
                let v = a.eval(p);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                }
            }
        }
    }

    /// True if the expression uses only the collar variable x (no y's).
    pub fn is_x_only(&self) -> bool {
        match self {
            Expr::Var(i) => *i == X_VAR,
            Expr::Num(_) | Expr::Pi => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_x_only(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_x_only() && b.is_x_only(),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) if *i != X_VAR => Some(*i),
            Expr::Num(_) | Expr::Pi | Expr::Var(_) => None,
            Expr::Neg(a) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Taylor-expand an x-only expression as a truncated series in x.
    pub fn eval_series(&self, order: usize) -> Result<PowerLogSeries<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Expr::Num(v) => Ok(PowerLogSeries::constant(Complex64::new(*v, 0.0), order)),
            Expr::Pi => Ok(PowerLogSeries::constant(
                Complex64::new(std::f64::consts::PI, 0.0),
                order,
            )),
            Expr::Var(i) if *i == X_VAR => {
                let mut c = vec![zero; order + 1];
                if order >= 1 {
                    c[1] = one;
                } else {
                    return Err(Error::InvalidParameter(
                        "series order too small for x".into(),
                    ));
                }
                Ok(PowerLogSeries::from_plain(zero, c))
            }
            Expr::Var(_) => Err(Error::InvalidParameter(
                "warp expressions may only use x".into(),
            )),
            Expr::Neg(a) => Ok(a.eval_series(order)?.scale(-one)),
            Expr::Add(a, b) => a.eval_series(order)?.add(&b.eval_series(order)?),
            Expr::Sub(a, b) => a.eval_series(order)?.sub(&b.eval_series(order)?),
            Expr::Mul(a, b) => a.eval_series(order)?.mul(&b.eval_series(order)?),
            Expr::Div(a, b) => a.eval_series(order)?.mul(&b.eval_series(order)?.inverse()?),
            Expr::Pow(a, b) => {
                let base = a.eval_series(order)?;
                // integer constant exponents by repeated multiplication
                if let Expr::Num(e) = **b {
                    if (e - e.round()).abs() < 1e-12 && e.round() >= 0.0 && e.round() <= 64.0 {
                        let k = e.round() as usize;
                        let mut acc = PowerLogSeries::constant(one, order);
                        for _ in 0..k {
                            acc = acc.mul(&base)?;
                        }
                        return Ok(acc);
                    }
                }
                let exponent = b.eval_series(order)?;
                exp_series(&exponent.mul(&log_series(&base)?)?)
            }
            Expr::Call(f, a) => {
                let u = a.eval_series(order)?;
                match f {
                    Func::Sin => Ok(sin_cos_series(&u)?.0),
                    Func::Cos => Ok(sin_cos_series(&u)?.1),
                    Func::Exp => exp_series(&u),
                    Func::Log => log_series(&u),
                }
            }
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(i) => {
                if *i == X_VAR {
                    write!(f, "x")
                } else {
                    write!(f, "y{}", i + 1)
                }
            }
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Call(g, a) => write!(f, "{}({a})", g.name()),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err_at(p.pos, "unexpected trailing input".into()));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err_at(&self, offset: usize, msg: String) -> Error {
        Error::Parse { msg, offset }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            // right associative; exponent may carry unary minus
            let exp = self.unary()?;
            Ok(Expr::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err_at(start, "unbalanced parentheses".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.err_at(start, format!("unexpected character '{}'", c as char))),
            None => Err(self.err_at(start, "unexpected end of input".into())),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' {
                self.pos += 1;
                // allow a sign right after an exponent marker
                if (c == b'e' || c == b'E') && matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: f64 = text
            .parse()
            .map_err(|_| self.err_at(start, format!("invalid number '{text}'")))?;
        self.skip_ws();
        Ok(Expr::Num(v))
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        self.skip_ws();
        let func = match name.as_str() {
            "pi" => return Ok(Expr::Pi),
            "x" => return Ok(Expr::Var(X_VAR)),
            "y1" => return Ok(Expr::Var(0)),
            "y2" => return Ok(Expr::Var(1)),
            "y3" => return Ok(Expr::Var(2)),
            "y4" => return Ok(Expr::Var(3)),
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => {
                return Err(self.err_at(start, format!("unknown identifier '{name}'")));
            }
        };
        if !self.eat(b'(') {
            return Err(self.err_at(
                start,
                format!("arity mismatch: function '{}' needs one argument", func.name()),
            ));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.err_at(start, "unbalanced parentheses".into()));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_expression() {
        let e = parse_expression("sin(y1)+0.3*cos(2*y2)").unwrap();
        let v = e.eval(&EvalPoint::default());
        assert!((v - 0.3).abs() < 1e-15);
    }

    #[test]
    fn power_right_associative() {
        let e = parse_expression("2^3^2").unwrap();
        assert!((e.eval(&EvalPoint::default()) - 512.0).abs() < 1e-12);
    }

    #[test]
    fn left_associative_sub_div() {
        let e = parse_expression("8-3-2").unwrap();
        assert!((e.eval(&EvalPoint::default()) - 3.0).abs() < 1e-15);
        let e = parse_expression("16/4/2").unwrap();
        assert!((e.eval(&EvalPoint::default()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unary_minus_binds_below_power() {
        let e = parse_expression("-2^2").unwrap();
        assert!((e.eval(&EvalPoint::default()) + 4.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_identifier_error_contract() {
        let err = parse_expression("foo(y1)").unwrap_err();
        assert_eq!(err.to_string(), "unknown identifier 'foo' at offset 0");
    }

    #[test]
    fn unbalanced_parens() {
        let err = parse_expression("sin(y1").unwrap_err();
        assert!(err.to_string().contains("unbalanced parentheses"));
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "sin(y1)+0.3*cos(2*y2)",
            "2^3^2",
            "-(x*x)/4+1",
            "exp(log(1+x))",
            "(1-x^2/4)^2",
            "pi*y3-y4/2",
        ] {
            let e = parse_expression(src).unwrap();
            let printed = format!("{e}");
            let e2 = parse_expression(&printed).unwrap();
            assert_eq!(e, e2, "round trip failed for {src}: {printed}");
        }
    }

    #[test]
    fn series_expansion_of_warp() {
        let e = parse_expression("(1-x^2/4)^2").unwrap();
        let s = e.eval_series(4).unwrap();
        let want = [1.0, 0.0, -0.5, 0.0, 1.0 / 16.0];
        for (j, w) in want.iter().enumerate() {
            let got = s.plain_coeff(j).unwrap();
            assert!((got - num_complex::Complex64::new(*w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn series_expansion_transcendental() {
        let e = parse_expression("exp(x)*(1+x)").unwrap();
        let s = e.eval_series(3).unwrap();
        // exp(x)(1+x) = 1 + 2x + 3/2 x^2 + 2/3 x^3 + ...
        let want = [1.0, 2.0, 1.5, 2.0 / 3.0];
        for (j, w) in want.iter().enumerate() {
            let got = s.plain_coeff(j).unwrap();
            assert!((got - num_complex::Complex64::new(*w, 0.0)).norm() < 1e-13);
        }
    }
}
