//! Recursive-descent reader for arithmetic expressions over a [`Field`].

use num_bigint::BigInt;

use super::{Field, ScalarError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().expect("ascii digits")));
        } else if c.is_ascii_alphabetic() {
            out.push(Tok::Var(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ScalarError::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, F, V> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a V,
    src: &'a str,
    _f: std::marker::PhantomData<F>,
}

impl<'a, F: Field, V: Fn(char) -> Option<F>> Parser<'a, F, V> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse(format!("{msg} in {:?}", self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<F, ScalarError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<F, ScalarError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).ok_or(ScalarError::DivisionByZero)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<F, ScalarError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<F, ScalarError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek_op() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e: u32 = match self.toks.get(self.pos) {
            Some(Tok::Int(n)) => u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        let mut out = F::one();
        for _ in 0..e {
            out = out.mul(&base);
        }
        if negative {
            out = out.inv().ok_or(ScalarError::DivisionByZero)?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<F, ScalarError> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(F::from_rational(&super::Rational::from_integer(n))),
            Tok::Var(c) => (self.vars)(c).ok_or_else(|| self.err(&format!("unknown variable {c:?}"))),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected {c:?}"))),
        }
    }
}

/// Parses `s` with `vars` resolving single-letter variable names.
pub fn parse_expr<F: Field>(s: &str, vars: impl Fn(char) -> Option<F>) -> Result<F, ScalarError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ScalarError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, vars: &vars, src: s, _f: std::marker::PhantomData };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}
