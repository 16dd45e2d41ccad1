use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// A rational q-exponent n/d, kept reduced with d > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QExp(Ratio<i64>);

impl QExp {
    pub const ZERO: QExp = QExp(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero exponent denominator");
        QExp(Ratio::new(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        QExp(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        QExp(self.0.abs())
    }
}

impl From<i64> for QExp {
    fn from(n: i64) -> Self {
        QExp::int(n)
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, rhs: QExp) -> QExp {
        QExp(self.0 + rhs.0)
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        QExp(-self.0)
    }
}

impl Mul<i64> for QExp {
    type Output = QExp;
    fn mul(self, rhs: i64) -> QExp {
        QExp(self.0 * rhs)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl std::str::FromStr for QExp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse::<i64>().map_err(|e| e.to_string())?;
                let d = d.trim().parse::<i64>().map_err(|e| e.to_string())?;
                if d == 0 {
                    return Err("zero denominator".into());
                }
                Ok(QExp::new(n, d))
            }
            None => s.parse::<i64>().map(QExp::int).map_err(|e| e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let e = QExp::new(6, -4);
        assert_eq!((e.numer(), e.denom()), (-3, 2));
        assert_eq!(QExp::new(4, 2), QExp::int(2));
        assert!(QExp::new(4, 2).is_integer());
        assert_eq!("-3/2".parse::<QExp>().unwrap(), e);
        assert_eq!(e.to_string(), "-3/2");
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(QExp::new(1, 3) < QExp::new(1, 2));
        assert!(QExp::int(-1) < QExp::ZERO);
    }
}
