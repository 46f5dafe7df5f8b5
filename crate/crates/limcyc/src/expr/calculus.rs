//! Exact differentiation, polynomial extraction and symbolic antiderivatives.

use super::{add, div, mul, neg, pow, sub, Expr, Var};

/// Exact symbolic derivative. Product, quotient and chain rules;
/// `d(sin) = cos`, `d(cos) = -sin`, `d(exp) = exp`.
pub(super) fn differentiate(e: &Expr, var: Var) -> Expr {
    match e {
        Expr::Num(_) => Expr::Num(0.0),
        Expr::Var(v) => Expr::Num(if *v == var { 1.0 } else { 0.0 }),
        Expr::Add(a, b) => add(differentiate(a, var), differentiate(b, var)),
        Expr::Sub(a, b) => sub(differentiate(a, var), differentiate(b, var)),
        Expr::Mul(a, b) => add(
            mul(differentiate(a, var), b.as_ref().clone()),
            mul(a.as_ref().clone(), differentiate(b, var)),
        ),
        Expr::Div(a, b) => {
            let num = sub(
                mul(differentiate(a, var), b.as_ref().clone()),
                mul(a.as_ref().clone(), differentiate(b, var)),
            );
            div(num, pow(b.as_ref().clone(), 2))
        }
        Expr::Pow(a, n) => {
            if *n == 0 {
                Expr::Num(0.0)
            } else {
                mul(
                    mul(Expr::Num(*n as f64), pow(a.as_ref().clone(), n - 1)),
                    differentiate(a, var),
                )
            }
        }
        Expr::Neg(a) => neg(differentiate(a, var)),
        Expr::Sin(a) => mul(Expr::Cos(a.clone()), differentiate(a, var)),
        Expr::Cos(a) => neg(mul(Expr::Sin(a.clone()), differentiate(a, var))),
        Expr::Exp(a) => mul(Expr::Exp(a.clone()), differentiate(a, var)),
    }
}

const MAX_POLY_DEGREE: usize = 64;

fn convolve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    if a.len() + b.len() > MAX_POLY_DEGREE + 2 {
        return None;
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    Some(out)
}

fn trim(mut v: Vec<f64>) -> Vec<f64> {
    while v.len() > 1 && *v.last().unwrap() == 0.0 {
        v.pop();
    }
    v
}

/// Coefficients `[c0, c1, ...]` of the expression as a polynomial in `var`,
/// provided it does not involve the other variable, transcendental functions
/// or division by a non-constant. Constant divisors are folded in.
pub(super) fn polynomial(e: &Expr, var: Var) -> Option<Vec<f64>> {
    let other = match var {
        Var::X => Var::Y,
        Var::Y => Var::X,
    };
    if e.uses(other) {
        return None;
    }
    poly_rec(e, var).map(trim)
}

fn poly_rec(e: &Expr, var: Var) -> Option<Vec<f64>> {
    match e {
        Expr::Num(v) => Some(vec![*v]),
        Expr::Var(v) if *v == var => Some(vec![0.0, 1.0]),
        Expr::Var(_) => None,
        Expr::Add(a, b) => {
            let (a, b) = (poly_rec(a, var)?, poly_rec(b, var)?);
            let mut out = vec![0.0; a.len().max(b.len())];
            for (i, &c) in a.iter().enumerate() {
                out[i] += c;
            }
            for (i, &c) in b.iter().enumerate() {
                out[i] += c;
            }
            Some(out)
        }
        Expr::Sub(a, b) => {
            let (a, b) = (poly_rec(a, var)?, poly_rec(b, var)?);
            let mut out = vec![0.0; a.len().max(b.len())];
            for (i, &c) in a.iter().enumerate() {
                out[i] += c;
            }
            for (i, &c) in b.iter().enumerate() {
                out[i] -= c;
            }
            Some(out)
        }
        Expr::Mul(a, b) => convolve(&poly_rec(a, var)?, &poly_rec(b, var)?),
        Expr::Div(a, b) => {
            let denom = b.constant_value()?;
            if denom == 0.0 {
                return None;
            }
            Some(poly_rec(a, var)?.into_iter().map(|c| c / denom).collect())
        }
        Expr::Pow(a, n) => {
            let base = poly_rec(a, var)?;
            let mut out = vec![1.0];
            for _ in 0..*n {
                out = convolve(&out, &base)?;
            }
            Some(out)
        }
        Expr::Neg(a) => Some(poly_rec(a, var)?.into_iter().map(|c| -c).collect()),
        Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => None,
    }
}

fn poly_to_expr(coeffs: &[f64], var: Var) -> Expr {
    let mut out = Expr::Num(0.0);
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        out = add(out, mul(Expr::Num(c), pow(Expr::Var(var), k as u32)));
    }
    out
}

/// Antiderivative in `var` with zero constant of integration, for the
/// supported fragment: polynomials, plus `sin`, `cos`, `exp` of arguments
/// linear in `var`, combined by `+`, `-` and constant factors.
/// Returns `None` when the expression falls outside that fragment.
pub fn antiderivative(e: &Expr, var: Var) -> Option<Expr> {
    if let Some(coeffs) = polynomial(e, var) {
        let mut anti = vec![0.0];
        for (k, &c) in coeffs.iter().enumerate() {
            anti.push(c / (k + 1) as f64);
        }
        return Some(poly_to_expr(&anti, var));
    }
    match e {
        Expr::Add(a, b) => Some(add(antiderivative(a, var)?, antiderivative(b, var)?)),
        Expr::Sub(a, b) => Some(sub(antiderivative(a, var)?, antiderivative(b, var)?)),
        Expr::Neg(a) => Some(neg(antiderivative(a, var)?)),
        Expr::Mul(a, b) => {
            if let Some(c) = a.constant_value() {
                Some(mul(Expr::Num(c), antiderivative(b, var)?))
            } else if let Some(c) = b.constant_value() {
                Some(mul(Expr::Num(c), antiderivative(a, var)?))
            } else {
                None
            }
        }
        Expr::Div(a, b) => {
            let c = b.constant_value()?;
            if c == 0.0 {
                return None;
            }
            Some(div(antiderivative(a, var)?, Expr::Num(c)))
        }
        Expr::Sin(arg) => {
            let slope = linear_slope(arg, var)?;
            // int sin(a v + b) dv = -cos(a v + b)/a
            Some(div(neg(Expr::Cos(arg.clone())), Expr::Num(slope)))
        }
        Expr::Cos(arg) => {
            let slope = linear_slope(arg, var)?;
            Some(div(Expr::Sin(arg.clone()), Expr::Num(slope)))
        }
        Expr::Exp(arg) => {
            let slope = linear_slope(arg, var)?;
            Some(div(Expr::Exp(arg.clone()), Expr::Num(slope)))
        }
        _ => None,
    }
}

/// Nonzero slope `a` when `arg = a*var + b`.
fn linear_slope(arg: &Expr, var: Var) -> Option<f64> {
    let coeffs = polynomial(arg, var)?;
    if coeffs.len() == 2 && coeffs[1] != 0.0 {
        Some(coeffs[1])
    } else {
        None
    }
}
