//! Operator expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' UINT)?
//! atom   := NUMBER ('/' NUMBER)? | 'x' UINT | 'd' UINT | 'E'
//!         | 'inv' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `x_i` is multiplication by the `i`-th coordinate (one-based), `d_i` the
//! `i`-th partial derivative, `E` the normal-ordered exponential in
//! `x_1, d_1`, and `inv(f)` the inverse of an order-zero operator, i.e. of a
//! unit power series. `E` and `inv` are truncated at the configured
//! precision; everything else stays exact.

use num_bigint::BigInt;

use super::{normal_ordered_exp, DiffOp};
use crate::error::{Error, Result};
use crate::poly::Exponent;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Number of variables; inferred from the largest index when `None`.
    pub nvars: Option<usize>,
    /// Truncation used for `E` and `inv`.
    pub precision: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            nvars: None,
            precision: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X(usize),
    D(usize),
    E,
    Inv,
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = digits(&mut i);
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if c == 'x' || c == 'd' {
            i += 1;
            let s = digits(&mut i);
            let k: usize = s
                .parse()
                .map_err(|_| Error::parse(pos, format!("expected an index after '{c}'")))?;
            if k == 0 {
                return Err(Error::parse(pos, "indices start at 1"));
            }
            out.push((
                pos,
                if c == 'x' {
                    Tok::X(k - 1)
                } else {
                    Tok::D(k - 1)
                },
            ));
        } else if c == 'E' {
            i += 1;
            out.push((pos, Tok::E));
        } else if chars[i..].starts_with(&['i', 'n', 'v']) {
            i += 3;
            out.push((pos, Tok::Inv));
        } else if "+-*/^()".contains(c) {
            i += 1;
            out.push((pos, Tok::Sym(c)));
        } else {
            return Err(Error::parse(pos, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    nvars: usize,
    precision: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<DiffOp> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffOp> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<DiffOp> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.at += 1;
                    let k: u32 = k
                        .try_into()
                        .map_err(|_| Error::parse(pos, "exponent too large"))?;
                    base.pow(k)
                }
                _ => Err(Error::parse(pos, "expected an unsigned exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<DiffOp> {
        let pos = self.pos();
        let n = self.nvars;
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::parse(pos, "unexpected end of input"))?;
        self.at += 1;
        match tok {
            Tok::Num(a) => {
                let mut c = Scalar::from_integer(a);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(b)) if b != BigInt::from(0) => {
                            self.at += 1;
                            c /= Scalar::from_integer(b);
                        }
                        _ => {
                            return Err(Error::parse(self.pos(), "expected a nonzero denominator"))
                        }
                    }
                }
                Ok(DiffOp::constant(n, c))
            }
            Tok::X(i) => Ok(DiffOp::x(n, i)),
            Tok::D(i) => Ok(DiffOp::d(n, i)),
            Tok::E => Ok(normal_ordered_exp(n, self.precision)),
            Tok::Inv => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                if inner.terms().any(|(a, _)| !a.is_zero()) {
                    return Err(Error::parse(pos, "inv() needs an order-zero argument"));
                }
                let f = TruncatedSeries::new(inner.coeff(&Exponent::zero(n)), self.precision);
                let g = f
                    .invert()
                    .map_err(|e| Error::parse(pos, format!("inv(): {e}")))?;
                Ok(DiffOp::mult_series(&g))
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Sym(c) => Err(Error::parse(pos, format!("unexpected '{c}'"))),
        }
    }
}

/// Parses an operator expression.
pub fn parse_operator(src: &str, opts: ParseOptions) -> Result<DiffOp> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "empty expression"));
    }
    if opts.precision == 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let needed = toks
        .iter()
        .map(|(_, t)| match t {
            Tok::X(i) | Tok::D(i) => i + 1,
            _ => 1,
        })
        .max()
        .unwrap_or(1);
    let nvars = match opts.nvars {
        Some(n) if n < needed => {
            return Err(Error::InvalidInput(format!(
                "expression uses {needed} variables but nvars is {n}"
            )))
        }
        Some(n) => n,
        None => needed,
    };
    let mut p = Parser {
        toks,
        at: 0,
        end: src.chars().count(),
        nvars,
        precision: opts.precision,
    };
    let op = p.expr()?;
    if p.at != p.toks.len() {
        return Err(Error::parse(p.pos(), "trailing input"));
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{OrderKind, Precision};
    use crate::scalar::frac;

    fn opts(n: u32) -> ParseOptions {
        ParseOptions {
            nvars: Some(2),
            precision: n,
        }
    }

    #[test]
    fn simple_expressions() {
        let p = parse_operator("d1*d2 + d1^2", opts(4)).unwrap();
        assert_eq!(p.order(OrderKind::Raw), Ok(2));
        assert_eq!(p.precision(), Precision::Exact);
        let q = parse_operator("d1*x1 - x1*d1", opts(4)).unwrap();
        assert_eq!(q, DiffOp::one(2));
        let r = parse_operator("-3/4*x2", opts(4)).unwrap();
        assert_eq!(r, DiffOp::x(2, 1).scale(&frac(-3, 4)));
    }

    #[test]
    fn series_and_exponential() {
        let q = parse_operator("d1*d2 + inv(1-x2)*E*d1", opts(5)).unwrap();
        assert!(q.is_dhat());
        assert_eq!(q.precision(), Precision::Trunc(5));
        assert_eq!(q.order(OrderKind::Stable), Ok(2));
        let inv = parse_operator("inv(1-x2)", opts(3)).unwrap();
        let one = parse_operator("(1-x2)*inv(1-x2)", opts(3)).unwrap();
        assert_eq!(one.coeff(&Exponent::zero(2)).constant_term(), frac(1, 1));
        assert_eq!(one.len(), 1);
        assert_eq!(inv.len(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_operator("", opts(3)),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_operator("d1 +", opts(3)),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_operator("d1 ? 2", opts(3)),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(matches!(
            parse_operator("inv(x1)", opts(3)),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_operator("inv(d1)", opts(3)),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_operator("x0", opts(3)),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_operator("(d1", opts(3)),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn nvars_inferred() {
        let p = parse_operator(
            "d3",
            ParseOptions {
                nvars: None,
                precision: 3,
            },
        )
        .unwrap();
        assert_eq!(p.nvars(), 3);
    }
}
