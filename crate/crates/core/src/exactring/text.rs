//! Textual form of [`LaurentQA`]: terms `coeff * q^{n/d} * a^{m}` in
//! canonical order joined by `" + "`, or `0`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use super::laurent::LaurentQA;
use super::qexp::QExp;
use crate::error::Error;

impl fmt::Display for LaurentQA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (a, q, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} * q^{{{q}}} * a^{{{a}}}")?;
        }
        Ok(())
    }
}

fn parse_power(token: &str, var: char) -> Result<&str, Error> {
    token
        .trim()
        .strip_prefix(var)
        .and_then(|t| t.strip_prefix("^{"))
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected {var}^{{..}}, got {token:?}")))
}

impl FromStr for LaurentQA {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentQA::zero());
        }
        let mut out = LaurentQA::zero();
        for term in s.split(" + ") {
            let pieces: Vec<&str> = term.split(" * ").collect();
            let [coeff, q, a] = pieces.as_slice() else {
                return Err(Error::Parse(format!("malformed term {term:?}")));
            };
            let c: BigRational = coeff
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{coeff:?}: {e}")))?;
            let q: QExp = parse_power(q, 'q')?.parse().map_err(Error::Parse)?;
            let a: i64 = parse_power(a, 'a')?
                .parse()
                .map_err(|e| Error::Parse(format!("{a:?}: {e}")))?;
            out.add_term(a, q, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::rat;

    #[test]
    fn renders_canonical_terms() {
        let f = LaurentQA::from_terms([
            (1, QExp::int(2), rat(3)),
            (-1, QExp::new(1, 2), BigRational::new(5.into(), (-2).into())),
        ]);
        assert_eq!(f.to_string(), "-5/2 * q^{1/2} * a^{-1} + 3 * q^{2} * a^{1}");
        assert_eq!(f.to_string().parse::<LaurentQA>().unwrap(), f);
        assert_eq!("0".parse::<LaurentQA>().unwrap(), LaurentQA::zero());
    }

    #[test]
    fn rejects_garbage() {
        assert!("3 * q^2 * a^{1}".parse::<LaurentQA>().is_err());
        assert!("x".parse::<LaurentQA>().is_err());
    }
}
