//! Canonical text form of polynomials.
//!
//! Terms appear in descending graded-lex order, joined by ` + ` / ` - `;
//! a term is an optional integer coefficient followed by `*`-joined powers
//! such as `z1^2*t1_2*h^-1*mu2`. The zero polynomial prints as `0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::poly::{Monomial, MultiPoly};
use super::var::VariableId;
use crate::error::ParseError;

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.pairs().iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseError::new("empty polynomial"));
        }
        let mut terms = Vec::new();
        let bytes = compact.as_bytes();
        let mut start = 0;
        // split on + / - that are not part of an exponent (`^-`)
        for i in 1..=bytes.len() {
            let split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
            if split {
                terms.push(parse_term(&compact[start..i])?);
                start = i;
            }
        }
        Ok(MultiPoly::from_terms(terms))
    }
}

fn parse_term(s: &str) -> Result<(Monomial, BigInt), ParseError> {
    let (sign, body) = match s.as_bytes().first() {
        Some(b'-') => (-1, &s[1..]),
        Some(b'+') => (1, &s[1..]),
        _ => (1, s),
    };
    if body.is_empty() {
        return Err(ParseError::new(format!("dangling sign in `{s}`")));
    }
    let mut coeff = BigInt::from(sign);
    let mut pairs = Vec::new();
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(ParseError::new(format!("empty factor in `{s}`")));
        }
        if factor.as_bytes()[0].is_ascii_digit() {
            let c: BigInt = factor
                .parse()
                .map_err(|_| ParseError::new(format!("bad coefficient `{factor}`")))?;
            coeff *= c;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i32>()
                    .map_err(|_| ParseError::new(format!("bad exponent in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        let v: VariableId = name.parse()?;
        pairs.push((v, exp));
    }
    Ok((Monomial::from_pairs(pairs), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_explicit_signs() {
        let p = MultiPoly::z(2).pow(2) - MultiPoly::z(1).scale(&2.into()) * MultiPoly::z(2)
            + MultiPoly::hbar()
            - MultiPoly::constant(3);
        assert_eq!(p.to_string(), "-2*z1*z2 + z2^2 + h - 3");
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert_eq!((-MultiPoly::z(1)).to_string(), "-z1");
    }

    #[test]
    fn parses_laurent_terms() {
        let p: MultiPoly = "z1^-1*h^2 - 3*t1_2 + mu1 + 7".parse().unwrap();
        assert_eq!(p.to_string(), "-3*t1_2 + mu1 + z1^-1*h^2 + 7");
        let q: MultiPoly = p.to_string().parse().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_garbage() {
        assert!("z1 +".parse::<MultiPoly>().is_err());
        assert!("x^2".parse::<MultiPoly>().is_err());
        assert!("".parse::<MultiPoly>().is_err());
    }
}
