use std::collections::BTreeMap;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qexp::QExp;
use super::qpoly::QPoly;
use crate::error::{Error, Result};

/// Sparse Laurent polynomial in q and a with rational coefficients and
/// rational q-exponents.
///
/// Keys are `(a_exp, q_exp)`, so iteration is a-major, q-minor. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentQA {
    terms: BTreeMap<(i64, QExp), BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LaurentQA {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, QExp::ZERO, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn monomial(c: BigRational, q_exp: QExp, a_exp: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(a_exp, q_exp, c);
        out
    }

    /// q^e
    pub fn q(e: i64) -> Self {
        Self::monomial(BigRational::one(), QExp::int(e), 0)
    }

    /// q^{n/d}
    pub fn q_frac(numer: i64, denom: i64) -> Self {
        Self::monomial(BigRational::one(), QExp::new(numer, denom), 0)
    }

    /// a^e
    pub fn a(e: i64) -> Self {
        Self::monomial(BigRational::one(), QExp::ZERO, e)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, QExp, BigRational)>) -> Self {
        let mut out = Self::zero();
        for (a, q, c) in terms {
            out.add_term(a, q, c);
        }
        out
    }

    pub fn add_term(&mut self, a_exp: i64, q_exp: QExp, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((a_exp, q_exp)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms as `(a_exp, q_exp, coeff)` in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, QExp, &BigRational)> + '_ {
        self.terms.iter().map(|(&(a, q), c)| (a, q, c))
    }

    pub fn coeff(&self, a_exp: i64, q_exp: QExp) -> BigRational {
        self.terms
            .get(&(a_exp, q_exp))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentQA {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&rat(s))
    }

    /// Multiplies by q^{q_shift} a^{a_shift}.
    pub fn shift(&self, q_shift: QExp, a_shift: i64) -> Self {
        LaurentQA {
            terms: self
                .terms
                .iter()
                .map(|(&(a, q), c)| ((a + a_shift, q + q_shift), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Ψ_d: q ↦ q^d, a ↦ a^d.
    pub fn adams(&self, d: i64) -> Self {
        assert!(d >= 1, "Adams operator needs d >= 1");
        LaurentQA {
            terms: self
                .terms
                .iter()
                .map(|(&(a, q), c)| ((a * d, q * d), c.clone()))
                .collect(),
        }
    }

    /// q ↦ q^{-1}.
    pub fn invert_q(&self) -> Self {
        LaurentQA {
            terms: self
                .terms
                .iter()
                .map(|(&(a, q), c)| ((a, -q), c.clone()))
                .collect(),
        }
    }

    /// a ↦ a^{-1}.
    pub fn invert_a(&self) -> Self {
        LaurentQA {
            terms: self
                .terms
                .iter()
                .map(|(&(a, q), c)| ((-a, q), c.clone()))
                .collect(),
        }
    }

    /// q ↦ −q; only meaningful with integer q-exponents.
    pub fn negate_q(&self) -> Result<Self> {
        self.require_integer_q("negate_q")?;
        Ok(LaurentQA {
            terms: self
                .terms
                .iter()
                .map(|(&(a, q), c)| ((a, q), if q.numer() % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        })
    }

    /// Evaluates a = 1, collapsing a-exponents.
    pub fn substitute_a_one(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(_, q), c)| (0, q, c.clone())))
    }

    pub fn is_q_only(&self) -> bool {
        self.terms.keys().all(|&(a, _)| a == 0)
    }

    pub fn has_integer_q_exponents(&self) -> bool {
        self.terms.keys().all(|(_, q)| q.is_integer())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn require_integer_q(&self, context: &str) -> Result<()> {
        if self.has_integer_q_exponents() {
            Ok(())
        } else {
            Err(Error::ResidualFractionalExponent {
                context: context.to_string(),
            })
        }
    }

    /// The distinct a-exponents, ascending.
    pub fn a_exponents(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.keys().map(|&(a, _)| a).collect();
        v.dedup();
        v
    }

    /// Splits into q-polynomials per a-exponent.
    pub fn a_slices(&self) -> Result<BTreeMap<i64, QPoly>> {
        self.require_integer_q("a_slices")?;
        let mut grouped: BTreeMap<i64, Vec<(i64, BigRational)>> = BTreeMap::new();
        for (&(a, q), c) in &self.terms {
            grouped.entry(a).or_default().push((q.numer(), c.clone()));
        }
        Ok(grouped
            .into_iter()
            .map(|(a, ts)| (a, QPoly::from_terms(ts)))
            .collect())
    }

    pub fn from_a_slices<'a>(slices: impl IntoIterator<Item = (i64, &'a QPoly)>) -> Self {
        let mut out = Self::zero();
        for (a, poly) in slices {
            for (e, c) in poly.terms() {
                out.add_term(a, QExp::int(e), c.clone());
            }
        }
        out
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        Self::from_a_slices([(0, p)])
    }

    /// The q-only part as a dense polynomial; errors if any a-exponent is nonzero.
    pub fn to_qpoly(&self) -> Result<QPoly> {
        if !self.is_q_only() {
            return Err(Error::PreconditionViolated(
                "expected a q-only polynomial".into(),
            ));
        }
        Ok(self.a_slices()?.remove(&0).unwrap_or_default())
    }

    /// Coefficients grouped by q-exponent: q_exp → (a_exp → coeff).
    pub fn q_slices(&self) -> BTreeMap<QExp, BTreeMap<i64, BigRational>> {
        let mut out: BTreeMap<QExp, BTreeMap<i64, BigRational>> = BTreeMap::new();
        for (&(a, q), c) in &self.terms {
            out.entry(q).or_default().insert(a, c.clone());
        }
        out
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.terms
            .values()
            .map(num_traits::Signed::abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl Add for &LaurentQA {
    type Output = LaurentQA;
    fn add(self, rhs: &LaurentQA) -> LaurentQA {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentQA {
    type Output = LaurentQA;
    fn sub(self, rhs: &LaurentQA) -> LaurentQA {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentQA {
    type Output = LaurentQA;
    fn neg(self) -> LaurentQA {
        LaurentQA {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for LaurentQA {
    type Output = LaurentQA;
    fn neg(self) -> LaurentQA {
        -&self
    }
}

impl Mul for &LaurentQA {
    type Output = LaurentQA;
    fn mul(self, rhs: &LaurentQA) -> LaurentQA {
        let mut out = LaurentQA::zero();
        for (&(a1, q1), c1) in &self.terms {
            for (&(a2, q2), c2) in &rhs.terms {
                out.add_term(a1 + a2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl AddAssign<&LaurentQA> for LaurentQA {
    fn add_assign(&mut self, rhs: &LaurentQA) {
        for (&(a, q), c) in &rhs.terms {
            self.add_term(a, q, c.clone());
        }
    }
}

impl SubAssign<&LaurentQA> for LaurentQA {
    fn sub_assign(&mut self, rhs: &LaurentQA) {
        for (&(a, q), c) in &rhs.terms {
            self.add_term(a, q, -c);
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for LaurentQA {
            type Output = LaurentQA;
            fn $m(self, rhs: LaurentQA) -> LaurentQA { (&self).$m(&rhs) }
        }
        impl $tr<&LaurentQA> for LaurentQA {
            type Output = LaurentQA;
            fn $m(self, rhs: &LaurentQA) -> LaurentQA { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Sum for LaurentQA {
    fn sum<I: Iterator<Item = LaurentQA>>(iter: I) -> Self {
        let mut acc = LaurentQA::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl Zero for LaurentQA {
    fn zero() -> Self {
        LaurentQA::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentQA {
    fn one() -> Self {
        LaurentQA::one()
    }
}
