//! Text form of multivectors.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := number ('*'? blade)? | blade
//! blade  := 'e' digit+            digits strictly ascending, each in 1..=n
//! number := integer | integer '/' integer | integer '.' digit+
//! ```
//!
//! Whitespace between tokens is ignored. Coefficients are exact rationals.

use std::fmt;

use ga_vieta::{BladeIndex, Multivector, Rational, Signature};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    IndexOutOfRange { index: usize, n: usize },
    RepeatedIndex { index: usize },
    DescendingIndex { index: usize, after: usize },
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: ", self.pos)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::IndexOutOfRange { index, n } => write!(f, "generator index {index} out of range 1..={n}"),
            ParseErrorKind::RepeatedIndex { index } => write!(f, "generator index {index} repeated in blade"),
            ParseErrorKind::DescendingIndex { index, after } => {
                write!(f, "generator index {index} follows {after}; indices must ascend")
            }
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
        }
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: Signature,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, pos: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { pos, kind })
    }

    fn syntax<T>(&self, msg: &str) -> Result<T, ParseError> {
        let found = match self.src.get(self.pos) {
            Some(c) => format!("{:?}", *c as char),
            None => "end of input".into(),
        };
        self.fail(self.pos, ParseErrorKind::Syntax(format!("{msg}, found {found}")))
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            return self.syntax("expected digits");
        }
        Ok(std::str::from_utf8(d).expect("ascii").parse().expect("digits"))
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let whole = self.integer()?;
        match self.src.get(self.pos) {
            Some(b'.') => {
                self.pos += 1;
                let frac = self.digits();
                if frac.is_empty() {
                    return self.syntax("expected digits after '.'");
                }
                let scale = BigInt::from(10).pow(frac.len() as u32);
                let frac: BigInt = std::str::from_utf8(frac).expect("ascii").parse().expect("digits");
                Ok(Rational::from_bigints(whole * &scale + frac, scale))
            }
            _ => {
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = {
                        self.skip_ws();
                        self.pos
                    };
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return self.fail(at, ParseErrorKind::ZeroDenominator);
                    }
                    Ok(Rational::from_bigints(whole, den))
                } else {
                    Ok(Rational::from_bigints(whole, BigInt::from(1)))
                }
            }
        }
    }

    fn blade(&mut self) -> Result<BladeIndex, ParseError> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'e') {
            return self.syntax("expected blade 'e<indices>'");
        }
        self.pos += 1;
        let start = self.pos;
        let d = self.digits();
        if d.is_empty() {
            self.pos = start;
            return self.syntax("expected generator indices after 'e'");
        }
        let n = self.sig.n();
        let mut gens: Vec<usize> = Vec::with_capacity(d.len());
        for (i, c) in d.iter().enumerate() {
            let index = (c - b'0') as usize;
            let at = start + i;
            if index == 0 || index > n {
                return self.fail(at, ParseErrorKind::IndexOutOfRange { index, n });
            }
            if gens.contains(&index) {
                return self.fail(at, ParseErrorKind::RepeatedIndex { index });
            }
            if let Some(&after) = gens.last() {
                if index < after {
                    return self.fail(at, ParseErrorKind::DescendingIndex { index, after });
                }
            }
            gens.push(index);
        }
        Ok(BladeIndex::from_generators(&gens).expect("validated above"))
    }

    fn term(&mut self) -> Result<(Rational, BladeIndex), ParseError> {
        match self.peek() {
            Some(b'e') => Ok((Rational::from(1), self.blade()?)),
            Some(c) if c.is_ascii_digit() => {
                let c = self.number()?;
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                        Ok((c, self.blade()?))
                    }
                    Some(b'e') => Ok((c, self.blade()?)),
                    _ => Ok((c, BladeIndex::SCALAR)),
                }
            }
            _ => self.syntax("expected number or blade"),
        }
    }

    fn expr(&mut self) -> Result<Multivector<Rational>, ParseError> {
        let mut out = Multivector::<Rational>::zero(self.sig);
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (c, b) = self.term()?;
            let c = if negate { -c } else { c };
            let total = out.coeff(b).clone() + c;
            out.set_coeff(b, total);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return self.syntax("expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
    }
}

/// Parses `text` as an element of `G(p,q)`.
pub fn parse_multivector(text: &str, sig: Signature) -> Result<Multivector<Rational>, ParseError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        sig,
    }
    .expr()
}

/// Coefficients that can be printed in the grammar above.
pub trait Coefficient {
    fn is_negative_value(&self) -> bool;
    fn abs_string(&self) -> String;
    fn is_unit(&self) -> bool;
}

impl Coefficient for Rational {
    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }

    fn abs_string(&self) -> String {
        self.abs().to_string()
    }

    fn is_unit(&self) -> bool {
        self.abs() == Rational::from(1)
    }
}

impl Coefficient for f64 {
    fn is_negative_value(&self) -> bool {
        self.is_sign_negative() && *self != 0.0
    }

    fn abs_string(&self) -> String {
        self.abs().to_string()
    }

    fn is_unit(&self) -> bool {
        self.abs() == 1.0
    }
}

/// Prints in the input grammar, terms in blade-index order; `0` when empty.
pub fn print_multivector<T: ga_vieta::Scalar + Coefficient>(m: &Multivector<T>) -> String {
    let mut out = String::new();
    for (b, c) in m.terms() {
        let neg = c.is_negative_value();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if b == BladeIndex::SCALAR {
            out.push_str(&c.abs_string());
        } else if c.is_unit() {
            out.push_str(&b.to_string());
        } else {
            out.push_str(&format!("{}*{b}", c.abs_string()));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    #[test]
    fn worked_example() {
        let m = parse_multivector("5 + 1/2*e2 + 1/2*e12", sig(2, 0)).unwrap();
        let h = Rational::new(1, 2);
        assert_eq!(m.coeffs(), &[Rational::from(5), Rational::from(0), h.clone(), h]);
        assert_eq!(print_multivector(&m), "5 + 1/2*e2 + 1/2*e12");
    }

    #[test]
    fn forms() {
        let s = sig(3, 0);
        let one = parse_multivector("1", s).unwrap();
        assert_eq!(one, Multivector::one(s));
        let m = parse_multivector(" -e1 + 0.25 e23 - 3*e123 + 2 - 2 ", s).unwrap();
        assert_eq!(print_multivector(&m), "-e1 + 1/4*e23 - 3*e123");
        assert_eq!(print_multivector(&parse_multivector("e1 - e1", s).unwrap()), "0");
        assert_eq!(parse_multivector("+4/6", s).unwrap(), Multivector::scalar(s, Rational::new(2, 3)));
        assert_eq!(parse_multivector("1.50", s).unwrap(), Multivector::scalar(s, Rational::new(3, 2)));
    }

    #[test]
    fn errors_carry_position() {
        let s = sig(2, 0);
        let e = parse_multivector("e21", s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DescendingIndex { index: 1, after: 2 });
        assert_eq!(e.pos, 2);
        let e = parse_multivector("1 + e13", s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::IndexOutOfRange { index: 3, n: 2 });
        assert_eq!(e.pos, 6);
        let e = parse_multivector("e11", s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::RepeatedIndex { index: 1 });
        assert_eq!(parse_multivector("1/0", s).unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        for bad in ["", "1 +", "2 e", "e", "1..2", "3 4", "*e1", "1 ** e1", "x"] {
            assert!(matches!(parse_multivector(bad, s), Err(ParseError { kind: ParseErrorKind::Syntax(_), .. })), "{bad:?}");
        }
        assert_eq!(parse_multivector("1 + x", s).unwrap_err().pos, 4);
    }

    #[test]
    fn float_printing() {
        let s = sig(1, 0);
        let m = Multivector::from_coeffs(s, vec![-0.5, 1.0]).unwrap();
        assert_eq!(print_multivector(&m), "-0.5 + e1");
    }
}
