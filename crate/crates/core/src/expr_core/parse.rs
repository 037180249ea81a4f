use super::field::Coeff;
use super::poly::Polynomial;
use super::rational::Rational;
use super::vars::VarTable;
use super::ExprError;

use num_bigint::BigInt;

/// Parses the expression grammar into an expanded polynomial over `vars`.
///
/// Literals are integers; `a/b` and any division by a nonzero constant are accepted. `^` takes
/// a non-negative integer literal. The bare name `i` is the imaginary unit when the coefficient
/// type has one and the table does not define `i`.
pub fn parse_expression<C: Coeff>(text: &str, vars: &VarTable) -> Result<Polynomial<C>, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.malformed("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn malformed(&self, msg: &str) -> ExprError {
        ExprError::MalformedSyntax { offset: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr<C: Coeff>(&mut self) -> Result<Polynomial<C>, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<Polynomial<C>, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary::<C>()?;
                    if !d.is_constant() {
                        return Err(ExprError::MalformedSyntax {
                            offset: at,
                            message: "division by a non-constant expression".into(),
                        });
                    }
                    let inv = d.constant_term().inv().ok_or(ExprError::MalformedSyntax {
                        offset: at,
                        message: "division by zero".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<C: Coeff>(&mut self) -> Result<Polynomial<C>, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary::<C>()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<C: Coeff>(&mut self) -> Result<Polynomial<C>, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = {
            self.skip_ws();
            self.pos
        };
        let digits = self.digits();
        if digits.is_empty() {
            return Err(match self.src.get(self.pos) {
                Some(b'-') | Some(b'(') | Some(b'.') => ExprError::NegativeOrNonIntegerExponent { offset: at },
                Some(c) if c.is_ascii_alphabetic() => ExprError::NegativeOrNonIntegerExponent { offset: at },
                _ => self.malformed("missing exponent"),
            });
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'/')) {
            return Err(ExprError::NegativeOrNonIntegerExponent { offset: at });
        }
        let e: u32 = digits
            .parse()
            .map_err(|_| ExprError::MalformedSyntax { offset: at, message: "exponent too large".into() })?;
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom<C: Coeff>(&mut self) -> Result<Polynomial<C>, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.malformed("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                if self.src.get(self.pos) == Some(&b'.') {
                    return Err(self.malformed("decimal literals are not accepted"));
                }
                let n: BigInt = d.parse().expect("digit string");
                Ok(Polynomial::constant(self.vars, C::from_rational(Rational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if let Some(i) = self.vars.index_of(name) {
                    return Ok(Polynomial::var(self.vars, i));
                }
                if name == "i" {
                    return match C::imaginary_unit() {
                        Some(u) => Ok(Polynomial::constant(self.vars, u)),
                        None => Err(ExprError::ImaginaryInRealMode),
                    };
                }
                Err(ExprError::UnknownVariable(name.to_string()))
            }
            Some(_) => Err(self.malformed("unexpected character")),
            None => Err(self.malformed("unexpected end of input")),
        }
    }
}
