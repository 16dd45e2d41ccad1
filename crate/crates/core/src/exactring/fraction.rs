use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::laurent::LaurentQA;
use super::qpoly::QPoly;
use crate::error::{Error, Result};

/// `num / den` with a denominator depending on q alone.
///
/// Equality is equality of the represented rational functions
/// (cross-multiplication), not of the stored pair.
#[derive(Clone, Debug)]
pub struct RingFraction {
    num: LaurentQA,
    den: QPoly,
}

impl RingFraction {
    pub fn new(num: LaurentQA, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RingFraction { num, den })
    }

    pub fn from_poly(num: LaurentQA) -> Self {
        RingFraction {
            num,
            den: QPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentQA::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentQA::one())
    }

    pub fn num(&self) -> &LaurentQA {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Clears the denominator by exact long division, one a-slice at a time.
    pub fn resolve(&self) -> Result<LaurentQA> {
        let mut out = LaurentQA::zero();
        for (a_exp, slice) in self.num.a_slices()? {
            let (quot, rem) = slice.div_rem(&self.den);
            if !rem.is_zero() {
                return Err(Error::NonExactDivision {
                    a_exp,
                    remainder: rem.to_string(),
                });
            }
            out += &LaurentQA::from_a_slices([(a_exp, &quot)]);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RingFraction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &LaurentQA) -> Self {
        RingFraction {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    pub fn div_qpoly(&self, d: &QPoly) -> Result<Self> {
        RingFraction::new(self.num.clone(), &self.den * d)
    }

    pub fn adams(&self, d: i64) -> Self {
        RingFraction {
            num: self.num.adams(d),
            den: self.den.adams(d),
        }
    }

    /// Rewrites over a new denominator that is a multiple of the current one.
    pub fn with_denominator(&self, den: &QPoly) -> Result<Self> {
        let cofactor = den
            .div_exact(&self.den)
            .ok_or_else(|| Error::NotDivisible {
                divisor: self.den.to_string(),
                remainder: den.to_string(),
            })?;
        Ok(RingFraction {
            num: &self.num * &LaurentQA::from_qpoly(&cofactor),
            den: den.clone(),
        })
    }

    /// Divides numerator and denominator by a common q-only factor, when it is one.
    pub fn cancel(&self, factor: &QPoly) -> Option<Self> {
        let den = self.den.div_exact(factor)?;
        let num = RingFraction {
            num: self.num.clone(),
            den: factor.clone(),
        }
        .resolve()
        .ok()?;
        Some(RingFraction { num, den })
    }
}

impl PartialEq for RingFraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &LaurentQA::from_qpoly(&other.den)
            == &other.num * &LaurentQA::from_qpoly(&self.den)
    }
}

impl Eq for RingFraction {}

impl From<LaurentQA> for RingFraction {
    fn from(p: LaurentQA) -> Self {
        RingFraction::from_poly(p)
    }
}

impl fmt::Display for RingFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RingFraction {
    type Output = RingFraction;
    fn add(self, rhs: &RingFraction) -> RingFraction {
        if self.den == rhs.den {
            return RingFraction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        if rhs.den == QPoly::one() {
            return RingFraction {
                num: &self.num + &(&rhs.num * &LaurentQA::from_qpoly(&self.den)),
                den: self.den.clone(),
            };
        }
        if self.den == QPoly::one() {
            return rhs + self;
        }
        RingFraction {
            num: &(&self.num * &LaurentQA::from_qpoly(&rhs.den))
                + &(&rhs.num * &LaurentQA::from_qpoly(&self.den)),
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &RingFraction {
    type Output = RingFraction;
    fn neg(self) -> RingFraction {
        RingFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RingFraction {
    type Output = RingFraction;
    fn sub(self, rhs: &RingFraction) -> RingFraction {
        self + &(-rhs)
    }
}

impl Mul for &RingFraction {
    type Output = RingFraction;
    fn mul(self, rhs: &RingFraction) -> RingFraction {
        RingFraction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl std::iter::Sum for RingFraction {
    fn sum<I: Iterator<Item = RingFraction>>(iter: I) -> Self {
        iter.fold(RingFraction::zero(), |acc, x| &acc + &x)
    }
}

impl Default for RingFraction {
    fn default() -> Self {
        Self::zero()
    }
}

impl RingFraction {
    pub fn is_one(&self) -> bool {
        *self == RingFraction::from_poly(LaurentQA::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(LaurentQA::constant(c))
    }

    pub fn inverse_of_qpoly(den: QPoly) -> Result<Self> {
        RingFraction::new(LaurentQA::one(), den)
    }
}
