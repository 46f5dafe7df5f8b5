//! Recursive-descent parser for the expression grammar.
//!
//! Precedence, from loosest to tightest: `+ -`, `* /`, unary `-`, `^`.
//! All binary operators are left-associative; whitespace is ignored.

use super::{Expr, ParseError, Var};

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
    End,
}

impl Tok {
    fn describe(&self) -> &'static str {
        match self {
            Tok::Num(_) => "number",
            Tok::Ident(_) => "identifier",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Slash => "`/`",
            Tok::Caret => "`^`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::End => "end of input",
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token plus its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => return self.lex_number(start),
            c if c.is_ascii_alphabetic() => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_alphanumeric() {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok((Tok::Ident(name), start));
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: "a number, identifier, operator or parenthesis".into(),
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }

    fn lex_number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let mut end = self.pos;
        while end < self.src.len() && self.src[end].is_ascii_digit() {
            end += 1;
        }
        if end < self.src.len() && self.src[end] == b'.' {
            end += 1;
            while end < self.src.len() && self.src[end].is_ascii_digit() {
                end += 1;
            }
        }
        // optional exponent part
        if end < self.src.len() && (self.src[end] == b'e' || self.src[end] == b'E') {
            let mut probe = end + 1;
            if probe < self.src.len() && (self.src[probe] == b'+' || self.src[probe] == b'-') {
                probe += 1;
            }
            if probe < self.src.len() && self.src[probe].is_ascii_digit() {
                probe += 1;
                while probe < self.src.len() && self.src[probe].is_ascii_digit() {
                    probe += 1;
                }
                end = probe;
            }
        }
        let text = std::str::from_utf8(&self.src[start..end]).unwrap();
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            expected: "a decimal number".into(),
        })?;
        self.pos = end;
        Ok((Tok::Num(value), start))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.idx]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = super::add(lhs, rhs);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = super::sub(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = super::mul(lhs, rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = super::div(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().0 == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(super::neg(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek().0 == Tok::Caret {
            self.bump();
            let (tok, offset) = self.bump();
            let n = match tok {
                Tok::Num(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => v as u32,
                _ => {
                    return Err(ParseError::Syntax {
                        offset,
                        expected: "a nonnegative integer exponent".into(),
                    })
                }
            };
            base = super::pow(base, n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var(Var::X)),
                "y" => Ok(Expr::Var(Var::Y)),
                "sin" | "cos" | "exp" => {
                    let (open, op_off) = self.bump();
                    if open != Tok::LParen {
                        return Err(ParseError::Syntax {
                            offset: op_off,
                            expected: format!("`(` after `{name}`"),
                        });
                    }
                    let arg = self.expr()?;
                    let (close, cl_off) = self.bump();
                    if close != Tok::RParen {
                        return Err(ParseError::Syntax { offset: cl_off, expected: "`)`".into() });
                    }
                    Ok(match name.as_str() {
                        "sin" => Expr::Sin(arg.into()),
                        "cos" => Expr::Cos(arg.into()),
                        _ => Expr::Exp(arg.into()),
                    })
                }
                _ => Err(ParseError::UnknownIdentifier { name, offset }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let (close, cl_off) = self.bump();
                if close != Tok::RParen {
                    return Err(ParseError::Syntax { offset: cl_off, expected: "`)`".into() });
                }
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                offset,
                expected: format!("a value, found {}", other.describe()),
            }),
        }
    }
}

/// Parse expression text into an [`Expr`].
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let (tok, off) = lexer.next()?;
        let end = tok == Tok::End;
        toks.push((tok, off));
        if end {
            break;
        }
    }
    let mut parser = Parser { toks, idx: 0 };
    let e = parser.expr()?;
    let (trailing, offset) = parser.peek().clone();
    if trailing != Tok::End {
        return Err(ParseError::Syntax {
            offset,
            expected: format!("an operator or end of input, found {}", trailing.describe()),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_offset_for_missing_operand() {
        let err = parse("x +").unwrap_err();
        assert_eq!(err.offset(), 3);
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn unknown_identifier() {
        let err = parse("x + z").unwrap_err();
        assert_eq!(err, ParseError::UnknownIdentifier { name: "z".into(), offset: 4 });
        let err = parse("tan(x)").unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { .. }));
    }

    #[test]
    fn exponent_must_be_nonnegative_integer() {
        assert!(parse("x^2").is_ok());
        assert!(parse("x^0").is_ok());
        assert!(matches!(parse("x^-1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x^2.5"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x^y"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ binds tighter than unary minus: -x^2 == -(x^2)
        assert_eq!(parse("-3^2").unwrap().eval(0.0, 0.0), -9.0);
        assert_eq!(parse("2-3-4").unwrap().eval(0.0, 0.0), -5.0);
        assert_eq!(parse("12/2/3").unwrap().eval(0.0, 0.0), 2.0);
        assert_eq!(parse("1+2*3").unwrap().eval(0.0, 0.0), 7.0);
        assert_eq!(parse("x^2^3").unwrap().eval(2.0, 0.0), 64.0);
        assert_eq!(parse("2*-3").unwrap().eval(0.0, 0.0), -6.0);
    }

    #[test]
    fn whitespace_ignored() {
        let a = parse("x^2-1").unwrap();
        let b = parse("  x ^ 2 -\t1 ").unwrap();
        assert_eq!(a.eval(1.5, 0.0), b.eval(1.5, 0.0));
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("   "), Err(ParseError::Empty));
    }

    #[test]
    fn scientific_notation() {
        assert_eq!(parse("1e-3").unwrap().eval(0.0, 0.0), 1e-3);
        assert_eq!(parse("2.5E2").unwrap().eval(0.0, 0.0), 250.0);
    }
}
