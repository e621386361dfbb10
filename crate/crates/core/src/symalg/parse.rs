//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' nat)?
//! primary := nat ('/' nat)? 'i'? | 'i' | var | 'exp' '(' expr ')' | '(' expr ')' | '-' factor
//! ```
//!
//! The argument of `exp` must reduce to an affine-linear form in the chart
//! variables. Everything printed by [`ExpPoly::to_expr_string`] parses back
//! to an equal value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{ExactScalar, ExpPoly, Monomial, VarSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().map_err(|_| Error::Parse { pos: start, msg: "bad integer".into() })?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a VarSet,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<ExpPoly> {
        let mut acc = if self.eat_sym('-') {
            -&self.term()?
        } else {
            self.eat_sym('+');
            self.term()?
        };
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExpPoly> {
        let mut acc = self.factor()?;
        while self.eat_sym('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ExpPoly> {
        let base = self.primary()?;
        if self.eat_sym('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse { pos: self.offset(), msg: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a natural-number exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<ExpPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(n);
                if self.eat_sym('/') {
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            value /= BigRational::from_integer(d);
                        }
                        _ => return self.err("expected a nonzero integer denominator"),
                    }
                }
                let mut c = ExactScalar::from_real(value);
                if self.peek() == Some(&Tok::Ident("i".into())) {
                    self.pos += 1;
                    c = &c * &ExactScalar::i();
                }
                Ok(ExpPoly::constant(self.vars, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "i" => Ok(ExpPoly::constant(self.vars, ExactScalar::i())),
                    "exp" => {
                        self.expect_sym('(')?;
                        let start = self.offset();
                        let arg = self.expr()?;
                        self.expect_sym(')')?;
                        exp_of_affine(self.vars, &arg).map_err(|e| match e {
                            Error::UnsupportedClass(msg) => Error::Parse { pos: start, msg },
                            other => other,
                        })
                    }
                    _ => ExpPoly::var(self.vars, &name).map_err(|_| Error::Parse {
                        pos: self.toks[self.pos - 1].0,
                        msg: format!("unknown variable `{name}`"),
                    }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            _ => self.err("expected a number, variable, `exp(` or `(`"),
        }
    }
}

fn exp_of_affine(vars: &VarSet, arg: &ExpPoly) -> Result<ExpPoly> {
    let n = vars.len();
    let mut freqs = vec![ExactScalar::zero(); n];
    let mut offset = ExactScalar::zero();
    for (m, c) in arg.terms() {
        if m.has_exponential() {
            return Err(Error::UnsupportedClass("nested exponential inside exp(...)".into()));
        }
        match m.degree() {
            0 => offset += c,
            1 => {
                let idx = m.exps.iter().position(|&e| e == 1).unwrap_or(0);
                freqs[idx] += c;
            }
            _ => return Err(Error::UnsupportedClass("exp(...) argument must be affine-linear".into())),
        }
    }
    let m = Monomial { exps: vec![0; n], freqs, offset };
    ExpPoly::from_term(vars, m, ExactScalar::one())
}

pub fn parse_exppoly(vars: &VarSet, s: &str) -> Result<ExpPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, vars, end: s.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let empty = VarSet::new::<&str>(&[])?;
    let e = parse_exppoly(&empty, s)?;
    e.as_constant().ok_or_else(|| Error::Parse { pos: 0, msg: "expected a constant".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> VarSet {
        VarSet::new(&["p", "q", "eta"]).unwrap()
    }

    #[test]
    fn parses_the_documented_example() {
        let v = vs();
        let e = parse_exppoly(&v, "(1/2 i) * p^2 * exp(q - 1/2 i*eta)").unwrap();
        let mut freqs = vec![ExactScalar::zero(); 3];
        freqs[1] = ExactScalar::one();
        freqs[2] = ExactScalar::gaussian(0, 1, -1, 2);
        let m = Monomial { exps: vec![2, 0, 0], freqs, offset: ExactScalar::zero() };
        let expected = ExpPoly::from_term(&v, m, ExactScalar::gaussian(0, 1, 1, 2)).unwrap();
        assert_eq!(e, expected);
        let printed = e.to_expr_string();
        assert_eq!(parse_exppoly(&v, &printed).unwrap(), e);
        assert_eq!(parse_exppoly(&v, &printed).unwrap().to_expr_string(), printed);
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("1/2 + 3/4 i").unwrap(), ExactScalar::gaussian(1, 2, 3, 4));
        assert_eq!(parse_scalar("1/2 - i").unwrap(), ExactScalar::gaussian(1, 2, -1, 1));
        assert_eq!(parse_scalar("-3").unwrap(), ExactScalar::int(-3));
        assert!(parse_scalar("p").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let v = vs();
        match parse_exppoly(&v, "p + x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_exppoly(&v, "exp(p^2)").is_err());
        assert!(parse_exppoly(&v, "p +").is_err());
        assert!(parse_exppoly(&v, "1/0").is_err());
        assert!(parse_exppoly(&v, "").is_err());
    }

    #[test]
    fn constant_offset_inside_exp() {
        let v = vs();
        let e = parse_exppoly(&v, "exp(q + 1/3)").unwrap();
        assert_eq!(e, ExpPoly::exp_var(&v, "q", ExactScalar::one()).unwrap().shift("q", &ExactScalar::ratio(1, 3)).unwrap());
        assert_eq!(parse_exppoly(&v, &e.to_expr_string()).unwrap(), e);
    }
}
