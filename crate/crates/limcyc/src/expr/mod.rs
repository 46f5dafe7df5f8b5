//! Symbolic expressions in the variables `x` and `y`.
//!
//! The expression language covers decimal literals, `x`, `y`, the binary
//! operators `+ - * /`, nonnegative integer powers `^n`, unary minus and the
//! functions `sin`, `cos`, `exp`. Expressions are immutable after parsing and
//! can be evaluated and differentiated exactly; see the repository README for
//! the full grammar in EBNF.

mod calculus;
mod parse;

pub use calculus::antiderivative;
pub use parse::parse;

use std::fmt;
use std::sync::Arc;

/// Variable of a planar expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
        }
    }
}

/// Parsed expression tree. Cheap to clone; subtrees are shared.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    /// Integer power with exponent >= 0.
    Pow(Arc<Expr>, u32),
    Neg(Arc<Expr>),
    Sin(Arc<Expr>),
    Cos(Arc<Expr>),
    Exp(Arc<Expr>),
}

/// Errors raised while parsing expression text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("empty expression")]
    Empty,
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } => *offset,
            ParseError::UnknownIdentifier { offset, .. } => *offset,
            ParseError::Empty => 0,
        }
    }
}

impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    /// Evaluate at `(x, y)`. Division by zero and overflow propagate as
    /// non-finite values; the evaluator never panics on finite input.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Add(a, b) => a.eval(x, y) + b.eval(x, y),
            Expr::Sub(a, b) => a.eval(x, y) - b.eval(x, y),
            Expr::Mul(a, b) => a.eval(x, y) * b.eval(x, y),
            Expr::Div(a, b) => a.eval(x, y) / b.eval(x, y),
            Expr::Pow(a, n) => a.eval(x, y).powi(*n as i32),
            Expr::Neg(a) => -a.eval(x, y),
            Expr::Sin(a) => a.eval(x, y).sin(),
            Expr::Cos(a) => a.eval(x, y).cos(),
            Expr::Exp(a) => a.eval(x, y).exp(),
        }
    }

    /// Exact partial derivative with respect to `var`.
    pub fn differentiate(&self, var: Var) -> Expr {
        calculus::differentiate(self, var)
    }

    /// True if the expression mentions `var` anywhere.
    pub fn uses(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses(var) || b.uses(var)
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.uses(var)
            }
        }
    }

    /// Dense coefficient vector when the expression is a polynomial in `var`
    /// and constant in the other variable. `None` otherwise.
    pub fn polynomial(&self, var: Var) -> Option<Vec<f64>> {
        calculus::polynomial(self, var)
    }

    /// Constant value when the expression contains no variable at all.
    pub fn constant_value(&self) -> Option<f64> {
        if self.uses(Var::X) || self.uses(Var::Y) {
            None
        } else {
            Some(self.eval(0.0, 0.0))
        }
    }
}

// ---- smart constructors with constant folding -------------------------------

fn fold(e: Expr) -> Expr {
    match &e {
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            if let (Expr::Num(x), Expr::Num(y)) = (a.as_ref(), b.as_ref()) {
                let v = match e {
                    Expr::Add(..) => x + y,
                    Expr::Sub(..) => x - y,
                    Expr::Mul(..) => x * y,
                    _ => x / y,
                };
                if v.is_finite() {
                    return Expr::Num(v);
                }
            }
            e
        }
        Expr::Neg(a) => {
            if let Expr::Num(x) = a.as_ref() {
                Expr::Num(-x)
            } else {
                e
            }
        }
        Expr::Pow(a, n) => {
            if let Expr::Num(x) = a.as_ref() {
                let v = x.powi(*n as i32);
                if v.is_finite() {
                    return Expr::Num(v);
                }
            }
            e
        }
        _ => e,
    }
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 1.0)
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    fold(Expr::Add(Arc::new(a), Arc::new(b)))
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return neg(b);
    }
    fold(Expr::Sub(Arc::new(a), Arc::new(b)))
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return Expr::Num(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    fold(Expr::Mul(Arc::new(a), Arc::new(b)))
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) && !is_zero(&b) {
        return Expr::Num(0.0);
    }
    if is_one(&b) {
        return a;
    }
    fold(Expr::Div(Arc::new(a), Arc::new(b)))
}

pub(crate) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Neg(inner) => inner.as_ref().clone(),
        other => fold(Expr::Neg(Arc::new(other))),
    }
}

pub(crate) fn pow(a: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::Num(1.0),
        1 => a,
        _ => fold(Expr::Pow(Arc::new(a), n)),
    }
}

// ---- printing ---------------------------------------------------------------

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if precedence(child) < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                write!(f, "+")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                write!(f, "-")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "/")?;
                write_child(f, b, 5)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 3)
            }
            Expr::Pow(a, n) => {
                write_child(f, a, 5)?;
                write!(f, "^{n}")
            }
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_spec_examples() {
        assert_eq!(parse("x^2-1").unwrap().eval(0.0, 0.0), -1.0);
        assert_eq!(parse("x^2 - 1").unwrap().eval(2.0, 0.0), 3.0);
        assert_eq!(parse("sin(x)").unwrap().eval(0.0, 5.0), 0.0);
    }

    #[test]
    fn eval_system8_p_at_1_0() {
        let p = parse("y*(x^2+y^2-(x^2+y^2)^2)+x*(1-3*(x^2+y^2)+(x^2+y^2)^2)").unwrap();
        assert_eq!(p.eval(1.0, 0.0), -1.0);
    }

    #[test]
    fn nonfinite_propagates() {
        let e = parse("1/x").unwrap();
        assert!(e.eval(0.0, 0.0).is_infinite());
        let e = parse("exp(x^2)").unwrap();
        assert!(e.eval(1.0e3, 0.0).is_infinite());
    }

    #[test]
    fn derivative_spec_examples() {
        let e = parse("x^2 - 1").unwrap().differentiate(Var::X);
        assert_eq!(e.eval(2.0, 0.0), 4.0);
        let e = parse("x*y").unwrap().differentiate(Var::Y);
        assert_eq!(e.eval(3.0, 7.0), 3.0);
        // Q of the two-cycle gallery system: Q = (5x^2-1)y^3 - x^3 - x y^2.
        let q = parse("(5*x^2-1)*y^3-x^3-x*y^2").unwrap();
        let qx = q.differentiate(Var::X);
        assert_eq!(qx.eval(1.0, 1.0), 6.0);
    }

    #[test]
    fn chain_rule_functions() {
        let e = parse("sin(x^2)").unwrap().differentiate(Var::X);
        let x = 0.7;
        assert!((e.eval(x, 0.0) - 2.0 * x * (x * x).cos()).abs() < 1e-15);
        let e = parse("exp(cos(y))").unwrap().differentiate(Var::Y);
        let y = -0.3;
        assert!((e.eval(0.0, y) - (-y.sin() * y.cos().exp())).abs() < 1e-15);
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "x^2-1",
            "y*(x^2+y^2-(x^2+y^2)^2)+x*(1-3*(x^2+y^2)+(x^2+y^2)^2)",
            "-x/(1+y^2)",
            "sin(x)*cos(y)-exp(x*y)",
            "1.5*x^2/(1+x^2)-0.5",
        ] {
            let e = parse(src).unwrap();
            let round = parse(&e.to_string()).unwrap();
            for i in 0..25 {
                let x = -2.0 + 0.17 * i as f64;
                let y = 1.3 - 0.11 * i as f64;
                let a = e.eval(x, y);
                let b = round.eval(x, y);
                assert!(
                    (a - b).abs() <= 1e-12 * (1.0 + a.abs()),
                    "{src} -> {e} differs at ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn polynomial_extraction() {
        let e = parse("x^2-1").unwrap();
        assert_eq!(e.polynomial(Var::X).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(e.polynomial(Var::Y).is_none());
        let e = parse("(x-1)*(x+1)").unwrap();
        assert_eq!(e.polynomial(Var::X).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(parse("sin(x)").unwrap().polynomial(Var::X).is_none());
        assert!(parse("x/y").unwrap().polynomial(Var::X).is_none());
        assert_eq!(parse("x/2").unwrap().polynomial(Var::X).unwrap(), vec![0.0, 0.5]);
    }
}
