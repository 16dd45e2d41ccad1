//! Dense univariate Laurent polynomials with integer exponents.
//!
//! [`QPoly`] carries rational coefficients and supports exact long
//! division; [`ZPoly`] is the integer-coefficient workhorse used by the
//! heavy partition sums, where rational normalization on every add would
//! dominate the cost.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Σ c_e q^e for e in `low..low+coeffs.len()`; no zero at either end.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    low: i64,
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { low, coeffs };
        p.normalize();
        p
    }

    pub fn from_int_coeffs(low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            low,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let Some(low) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        Self::from_coeffs(low, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        QPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        QPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// q ↦ q^d for d ≥ 1.
    pub fn adams(&self, d: i64) -> Self {
        assert!(d >= 1);
        Self::from_terms(self.terms().map(|(e, c)| (e * d, c.clone())))
    }

    /// q ↦ q^{-1}.
    pub fn invert(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        match self.high_degree() {
            Some(h) => QPoly { low: -h, coeffs },
            None => Self::zero(),
        }
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.invert()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Laurent long division: returns (quotient, remainder) with
    /// `self = divisor * quotient + remainder`, where the remainder is
    /// `q^{low(self)}` times a polynomial of degree below the span of the divisor.
    /// The remainder is zero exactly when the divisor divides `self` in the Laurent ring.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        if n < m {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); n - m + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + m - 1] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] -= &c * dj;
                }
            }
            quot[i] = c;
        }
        rem.truncate(m - 1);
        (
            QPoly::from_coeffs(self.low - divisor.low, quot),
            QPoly::from_coeffs(self.low, rem),
        )
    }

    /// Quotient when the division is exact.
    pub fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .rev()
            .map(|(e, c)| format!("{c}*q^{e}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_degree().unwrap().max(rhs.high_degree().unwrap());
        let mut coeffs = vec![BigRational::zero(); (high - low + 1) as usize];
        for (e, c) in self.terms().chain(rhs.terms()) {
            coeffs[(e - low) as usize] += c;
        }
        QPoly::from_coeffs(low, coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(QPoly, Add::add, Sub::sub, Mul::mul);

/// Integer-coefficient dense Laurent polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly::default()
    }

    pub fn one() -> Self {
        ZPoly {
            low: 0,
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = ZPoly { low, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Q_n(q^k) = (q^{nk} − q^{−nk})/(q^k − q^{−k}) written as its n-term sum;
    /// Q_{−n} = −Q_n and Q_0 = 0.
    pub fn qratio(n: i64, k: i64) -> Self {
        assert!(k != 0, "qratio with k = 0");
        if n == 0 {
            return Self::zero();
        }
        let sign = if n < 0 { -BigInt::one() } else { BigInt::one() };
        let n = n.abs();
        let k = k.abs();
        let step = 2 * k;
        let low = -(n - 1) * k;
        let mut coeffs = vec![BigInt::zero(); ((n - 1) * step + 1) as usize];
        for i in 0..n {
            coeffs[(i * step) as usize] = sign.clone();
        }
        Self::from_coeffs(low, coeffs)
    }

    pub fn mul(&self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let (dense, sparse) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (j, b) in sparse
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
        {
            for (i, a) in dense.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        ZPoly::from_coeffs(self.low + rhs.low, coeffs)
    }

    /// self += s · rhs
    pub fn add_scaled(&mut self, rhs: &ZPoly, s: &BigInt) {
        if rhs.is_zero() || s.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = ZPoly {
                low: rhs.low,
                coeffs: rhs.coeffs.iter().map(|c| c * s).collect(),
            };
            return;
        }
        let low = self.low.min(rhs.low);
        let high = (self.low + self.coeffs.len() as i64).max(rhs.low + rhs.coeffs.len() as i64);
        if low < self.low {
            let pad = (self.low - low) as usize;
            self.coeffs
                .splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.low = low;
        }
        self.coeffs
            .resize((high - self.low) as usize, BigInt::zero());
        let off = (rhs.low - self.low) as usize;
        for (i, c) in rhs.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.coeffs[off + i] += c * s;
            }
        }
        self.normalize();
    }

    /// Exact division over Z; `None` when the divisor does not divide or a
    /// quotient coefficient would be non-integral.
    pub fn div_exact(&self, divisor: &ZPoly) -> Option<ZPoly> {
        assert!(!divisor.is_zero());
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        if n < m {
            return None;
        }
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - m + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + m - 1];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return None;
            }
            let c = top / lead;
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] -= &c * dj;
                }
            }
            quot[i] = c;
        }
        rem[..m - 1]
            .iter()
            .all(Zero::is_zero)
            .then(|| ZPoly::from_coeffs(self.low - divisor.low, quot))
    }

    /// Converts to rationals, dividing every coefficient by `den`.
    pub fn to_qpoly_over(&self, den: &BigInt) -> QPoly {
        QPoly::from_coeffs(
            self.low,
            self.coeffs
                .iter()
                .map(|c| BigRational::new(c.clone(), den.clone()))
                .collect(),
        )
    }

    pub fn to_qpoly(&self) -> QPoly {
        self.to_qpoly_over(&BigInt::one())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}
