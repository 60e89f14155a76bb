//! Scalar expressions over `q`, `w`, integers, `^`, `*`, `/`, `+`, `-` and parentheses.
//!
//! `q` is `-w^2`. Exponents are integers and may be negative (`q^-6`, `q^(-6)`).

use qosc_core::Scalar;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected character {0:?} at {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of expression")]
    End,
    #[error("exponent must be an integer at {0}")]
    Exponent(usize),
    #[error("integer out of range at {0}")]
    Range(usize),
    #[error("division by zero")]
    DivZero,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Scalar, ExprError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.product()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Scalar, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                acc = acc.div(&self.unary()?).map_err(|_| ExprError::DivZero)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ExprError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.exponent().map_err(|_| ExprError::Exponent(at))?;
            if e < 0 && base.is_zero() {
                return Err(ExprError::DivZero);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        if self.eat(b'(') {
            let e = self.exponent()?;
            return if self.eat(b')') { Ok(e) } else { Err(ExprError::End) };
        }
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v = self.integer()?;
        let v = i32::try_from(v).map_err(|_| ExprError::Range(self.pos))?;
        Ok(if neg { -v } else { v })
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        self.peek();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.s.get(self.pos) {
                Some(&c) => Err(ExprError::Unexpected(c as char, self.pos)),
                None => Err(ExprError::End),
            };
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").parse().map_err(|_| ExprError::Range(start))
    }

    fn atom(&mut self) -> Result<Scalar, ExprError> {
        match self.peek() {
            None => Err(ExprError::End),
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(b')') {
                    return match self.peek() {
                        Some(c) => Err(ExprError::Unexpected(c as char, self.pos)),
                        None => Err(ExprError::End),
                    };
                }
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Scalar::q())
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Scalar::w_pow(1))
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::from_i64(self.integer()?)),
            Some(c) => Err(ExprError::Unexpected(c as char, self.pos)),
        }
    }
}

/// Parses a scalar expression.
pub fn parse_scalar(s: &str) -> Result<Scalar, ExprError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let v = p.sum()?;
    match p.peek() {
        None => Ok(v),
        Some(c) => Err(ExprError::Unexpected(c as char, p.pos)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_q() {
        assert_eq!(parse_scalar("q^-6").unwrap(), Scalar::q_pow(-6));
        assert_eq!(parse_scalar("q^(-6)").unwrap(), Scalar::q_pow(-6));
        assert_eq!(parse_scalar("-w^2").unwrap(), Scalar::q());
        assert_eq!(parse_scalar("1").unwrap(), Scalar::one());
    }

    #[test]
    fn arithmetic() {
        let v = parse_scalar("(q^2 - q^-2)/(q - q^-1)").unwrap();
        assert_eq!(v, Scalar::q().add(&Scalar::q_pow(-1)));
        assert_eq!(parse_scalar("2*q + 3 - q*2").unwrap(), Scalar::from_i64(3));
        assert_eq!(parse_scalar(" w * w ").unwrap(), Scalar::w_pow(2));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_scalar("q^x"), Err(ExprError::Exponent(_))));
        assert!(matches!(parse_scalar("1/0"), Err(ExprError::DivZero)));
        assert!(matches!(parse_scalar("(q"), Err(ExprError::End)));
        assert!(matches!(parse_scalar("z"), Err(ExprError::Unexpected('z', 0))));
        assert!(parse_scalar("").is_err());
    }
}
