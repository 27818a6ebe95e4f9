//! Text syntax for expressions and forms.
//!
//! ```text
//! form    := sum ('/\' sum)*
//! sum     := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := primary ('^' uint)?
//! primary := integer | identifier | 'd' '(' form ')' | '(' form ')'
//! ```
//!
//! `*` requires one side of degree zero and `/` a nonzero 0-form divisor.
//! The printers in [`crate::expr`] and [`crate::form`] emit this syntax.

use num_bigint::BigInt;
use num_traits::One;

use crate::chart::Chart;
use crate::error::SymbolicError;
use crate::expr::Expr;
use crate::form::Form;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SymbolicError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                out.push((start, Tok::Wedge));
                i += 2;
                continue;
            }
            _ => {}
        }
        let t = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(SymbolicError::Parse { position: start, message: format!("unexpected character '{ch}'") });
            }
        };
        out.push((start, t));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    chart: &'a Chart,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

type PResult<C> = Result<Form<C>, SymbolicError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err(&self, message: impl Into<String>) -> SymbolicError {
        SymbolicError::Parse { position: self.offset(), message: message.into() }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), SymbolicError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn form<C: Scalar>(&mut self) -> PResult<C> {
        let mut acc = self.sum()?;
        while self.eat(&Tok::Wedge) {
            let rhs = self.sum()?;
            acc = acc.wedge(&rhs)?;
        }
        Ok(acc)
    }

    fn sum<C: Scalar>(&mut self) -> PResult<C> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> PResult<C> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            if self.eat(&Tok::Star) {
                let rhs = self.unary()?;
                acc = match (acc.as_scalar(), rhs.as_scalar()) {
                    (Some(a), _) => rhs.mul_expr(&a)?,
                    (_, Some(b)) => acc.mul_expr(&b)?,
                    _ => {
                        return Err(SymbolicError::Parse {
                            position: at,
                            message: "'*' needs a 0-form on one side; use '/\\' for forms".into(),
                        })
                    }
                };
            } else if self.eat(&Tok::Slash) {
                let rhs = self.unary()?;
                let b = rhs.as_scalar().ok_or(SymbolicError::Parse {
                    position: at,
                    message: "divisor must be a 0-form".into(),
                })?;
                let inv = b.value().recip().map_err(|_| SymbolicError::Parse {
                    position: at,
                    message: "division by zero".into(),
                })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<C: Scalar>(&mut self) -> PResult<C> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary::<C>()?);
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power<C: Scalar>(&mut self) -> PResult<C> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let at = self.offset();
            let e = match self.peek() {
                Some(Tok::Int(n)) => u32::try_from(n).map_err(|_| SymbolicError::Parse {
                    position: at,
                    message: "exponent too large".into(),
                })?,
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            };
            self.pos += 1;
            let s = base.as_scalar().ok_or(SymbolicError::Parse {
                position: at,
                message: "only 0-forms can be raised to a power".into(),
            })?;
            return Ok(Form::scalar(&s.pow(e)));
        }
        Ok(base)
    }

    fn primary<C: Scalar>(&mut self) -> PResult<C> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let c = C::from_ratio(&n, &BigInt::one());
                Ok(Form::scalar(&Expr::constant(self.chart, c)))
            }
            Some(Tok::Ident(name)) if name == "d" && self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::LParen) => {
                self.pos += 2;
                let inner = self.form::<C>()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner.d())
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let e = Expr::var(self.chart, &name).map_err(|_| SymbolicError::Parse {
                    position: at,
                    message: format!("unknown variable '{name}'"),
                })?;
                Ok(Form::scalar(&e))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.form()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(_) => Err(self.err("expected a number, variable, 'd(' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse a differential form on `chart`.
pub fn parse_form<C: Scalar>(chart: &Chart, src: &str) -> Result<Form<C>, SymbolicError> {
    let toks = lex(src)?;
    let mut p = Parser { chart, toks, pos: 0, end: src.len() };
    let f = p.form()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

/// Parse a scalar expression (a 0-form) on `chart`.
pub fn parse_expr<C: Scalar>(chart: &Chart, src: &str) -> Result<Expr<C>, SymbolicError> {
    let f = parse_form::<C>(chart, src)?;
    f.as_scalar().ok_or(SymbolicError::NotScalar(f.max_degree()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn chart() -> Chart {
        Chart::with_params("c", &["x1", "x2", "u"], &["a"]).unwrap()
    }

    #[test]
    fn parses_scalars() {
        let c = chart();
        let e = parse_expr::<Q>(&c, "(x1 + 1)^2 - x1*x1 - 2*x1").unwrap();
        assert!(e.is_one());
        let e = parse_expr::<Q>(&c, "a*x2/3").unwrap();
        assert_eq!(e.to_string(), "1/3*x2*a");
    }

    #[test]
    fn parses_forms() {
        let c = chart();
        let f = parse_form::<Q>(&c, "d(u) - x2*d(x1)").unwrap();
        let df = parse_form::<Q>(&c, "d(x1) /\\ d(x2)").unwrap();
        assert_eq!(f.d(), df);
        assert!(parse_form::<Q>(&c, "d(a)").unwrap().is_zero());
    }

    #[test]
    fn reports_positions() {
        let c = chart();
        match parse_expr::<Q>(&c, "x1 + y") {
            Err(SymbolicError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        match parse_form::<Q>(&c, "d(x1) * d(x2)") {
            Err(SymbolicError::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr::<Q>(&c, "1/(x1 - x1)"), Err(SymbolicError::Parse { .. })));
        assert!(matches!(parse_expr::<Q>(&c, "d(x1)"), Err(SymbolicError::NotScalar(1))));
        assert!(matches!(parse_expr::<Q>(&c, "(x1"), Err(SymbolicError::Parse { position: 3, .. })));
    }

    #[test]
    fn printer_round_trips() {
        let c = chart();
        for s in [
            "x1^2*x2 - 1/2*u",
            "(x1 + 1)/(x2^2 - a)",
            "(x1 + 1)*d(x1) - x1*(d(x1) /\\ d(x2))",
            "3 + x2*d(u)",
        ] {
            let f = parse_form::<Q>(&c, s).unwrap();
            let g = parse_form::<Q>(&c, &f.to_string()).unwrap();
            assert_eq!(f, g, "{s} -> {f}");
        }
    }
}
