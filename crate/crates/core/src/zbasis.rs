//! The subrings ℚ[z², a^{±1}] ⊃ ℤ[z², a^{±1}] with z² = q² − 2 + q^{−2}.
//!
//! Membership is structural: every a-slice must use even q-exponents only
//! and be invariant under q ↦ q^{−1}. Conversion goes through w = q² + q^{−2}
//! with the Dickson recursion D_0 = 2, D_1 = w, D_k = w·D_{k−1} − D_{k−2}
//! (so q^{2k} + q^{−2k} = D_k(w)), then shifts w = z² + 2.
//!
//! Division by [p]² happens in the z²-coefficient basis, where [p]² is a
//! monic integer polynomial of degree p − 1.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactring::{qnum, LaurentQA, QExp, QPoly};

/// a-exponent → coefficients of (z²)^0, (z²)^1, ...
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZAPoly {
    slices: BTreeMap<i64, Vec<BigRational>>,
    integral: bool,
}

impl ZAPoly {
    pub fn zero() -> Self {
        ZAPoly {
            slices: BTreeMap::new(),
            integral: true,
        }
    }

    pub fn one() -> Self {
        Self::from_slices([(0, vec![BigRational::one()])])
    }

    /// Builds from raw slices, trimming trailing zero coefficients.
    pub fn from_slices(slices: impl IntoIterator<Item = (i64, Vec<BigRational>)>) -> Self {
        let mut map = BTreeMap::new();
        for (a, mut coeffs) in slices {
            while coeffs.last().is_some_and(Zero::is_zero) {
                coeffs.pop();
            }
            if !coeffs.is_empty() {
                map.insert(a, coeffs);
            }
        }
        let integral = map.values().flatten().all(|c: &BigRational| c.is_integer());
        ZAPoly {
            slices: map,
            integral,
        }
    }

    /// A q-only element from its z²-coefficients.
    pub fn from_z2_coeffs(coeffs: Vec<BigRational>) -> Self {
        Self::from_slices([(0, coeffs)])
    }

    pub fn slices(&self) -> &BTreeMap<i64, Vec<BigRational>> {
        &self.slices
    }

    pub fn slice(&self, a_exp: i64) -> &[BigRational] {
        self.slices.get(&a_exp).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    /// True iff every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Highest power of z² present; `None` for zero.
    pub fn z2_degree(&self) -> Option<usize> {
        self.slices.values().map(|c| c.len() - 1).max()
    }

    /// Lowest power of z² with a nonzero coefficient.
    pub fn z2_valuation(&self) -> Option<usize> {
        self.slices
            .values()
            .filter_map(|c| c.iter().position(|x| !x.is_zero()))
            .min()
    }

    /// Expands back into q and a.
    pub fn to_laurent(&self) -> LaurentQA {
        let z2 = z_squared();
        let mut out = LaurentQA::zero();
        for (&a, coeffs) in &self.slices {
            let mut power = LaurentQA::one();
            let mut slice = LaurentQA::zero();
            for c in coeffs {
                slice += &power.scale(c);
                power = &power * &z2;
            }
            out += &slice.shift(QExp::ZERO, a);
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_slices(
            self.slices
                .iter()
                .map(|(&a, cs)| (a, cs.iter().map(|c| c * s).collect())),
        )
    }
}

impl fmt::Display for ZAPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (&a, coeffs) in &self.slices {
            for (k, c) in coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut t = c.to_string();
                if k > 0 {
                    t.push_str(&format!("*z^{}", 2 * k));
                }
                if a != 0 {
                    t.push_str(&format!("*a^{a}"));
                }
                terms.push(t);
            }
        }
        f.write_str(&terms.join(" + "))
    }
}

impl Serialize for ZAPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.slices.len()))?;
        for (a, coeffs) in &self.slices {
            let strs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            map.serialize_entry(&a.to_string(), &strs)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ZAPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, Vec<String>> = BTreeMap::deserialize(d)?;
        let mut slices = Vec::new();
        for (a, coeffs) in raw {
            let a: i64 = a.parse().map_err(D::Error::custom)?;
            let coeffs = coeffs
                .iter()
                .map(|c| c.parse::<BigRational>().map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            slices.push((a, coeffs));
        }
        Ok(ZAPoly::from_slices(slices))
    }
}

/// z² = q² − 2 + q^{−2}.
pub fn z_squared() -> LaurentQA {
    LaurentQA::from_qpoly(&QPoly::from_int_coeffs(-2, &[1, 0, -2, 0, 1]))
}

/// Coefficients in w of the Dickson polynomials D_0..=D_k.
fn dickson_table(k: usize) -> Vec<Vec<BigInt>> {
    let mut table: Vec<Vec<BigInt>> =
        vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    while table.len() <= k {
        let n = table.len();
        let mut next = vec![BigInt::zero(); n + 1];
        for (i, c) in table[n - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in table[n - 2].iter().enumerate() {
            next[i] -= c;
        }
        table.push(next);
    }
    table.truncate(k + 1);
    table
}

/// P(x) ↦ P(x + 2), Horner in ℤ[x].
fn shift_by_two(p: &[BigInt]) -> Vec<BigInt> {
    let mut acc: Vec<BigInt> = Vec::with_capacity(p.len());
    for c in p.iter().rev() {
        // acc = acc * (x + 2) + c
        acc.push(BigInt::zero());
        for i in (1..acc.len()).rev() {
            let lower = &acc[i - 1] * 2u32;
            let prev = std::mem::take(&mut acc[i - 1]);
            acc[i] += prev;
            acc[i - 1] = lower;
        }
        acc[0] += c;
    }
    acc
}

fn check_even_palindromic(a_exp: i64, slice: &QPoly) -> Result<()> {
    if slice.terms().any(|(e, _)| e % 2 != 0) {
        return Err(Error::NotInSubring {
            reason: format!("odd q-exponent in the a^{a_exp} slice"),
        });
    }
    if !slice.is_palindromic() {
        return Err(Error::NotInSubring {
            reason: format!("a^{a_exp} slice is not palindromic in q"),
        });
    }
    Ok(())
}

/// Even palindromic slice → z²-coefficients, computed over ℤ after clearing denominators.
fn slice_to_z2(slice: &QPoly, dickson: &[Vec<BigInt>]) -> Vec<BigRational> {
    let top = (slice.high_degree().unwrap_or(0) / 2) as usize;
    let den = slice
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let scaled = |e: i64| -> BigInt {
        let c = slice.coeff(e);
        c.numer() * (&den / c.denom())
    };
    let mut in_w = vec![BigInt::zero(); top + 1];
    in_w[0] = scaled(0);
    for (k, row) in dickson.iter().enumerate().take(top + 1).skip(1) {
        let c = scaled(2 * k as i64);
        if c.is_zero() {
            continue;
        }
        for (i, d) in row.iter().enumerate() {
            if !d.is_zero() {
                in_w[i] += &c * d;
            }
        }
    }
    shift_by_two(&in_w)
        .into_iter()
        .map(|c| BigRational::new(c, den.clone()))
        .collect()
}

/// Rewrites f in the z²-basis; fails unless every a-slice is even and palindromic in q.
pub fn to_z2(f: &LaurentQA) -> Result<ZAPoly> {
    if !f.has_integer_q_exponents() {
        return Err(Error::NotInSubring {
            reason: "fractional q-exponent".into(),
        });
    }
    let a_slices = f.a_slices()?;
    for (a, slice) in &a_slices {
        check_even_palindromic(*a, slice)?;
    }
    let top = a_slices
        .values()
        .filter_map(QPoly::high_degree)
        .max()
        .unwrap_or(0)
        / 2;
    let dickson = dickson_table((top as usize).max(1));
    Ok(ZAPoly::from_slices(
        a_slices
            .iter()
            .map(|(a, slice)| (*a, slice_to_z2(slice, &dickson))),
    ))
}

/// [p]² in the z²-basis: monic of degree p − 1.
pub fn qnum_squared_z2(p: u32) -> Vec<BigRational> {
    assert!(p >= 1);
    let z = to_z2(&qnum(p as i64).pow(2)).expect("[p]^2 lies in Z[z^2]");
    z.slice(0).to_vec()
}

/// Polynomial division in ℚ[x] by a monic divisor.
fn div_rem_monic(
    f: &[BigRational],
    divisor: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let m = divisor.len();
    debug_assert!(divisor.last().is_some_and(One::is_one));
    if f.len() < m {
        return (Vec::new(), f.to_vec());
    }
    let mut rem = f.to_vec();
    let mut quot = vec![BigRational::zero(); f.len() - m + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + m - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in divisor.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    rem.truncate(m - 1);
    (quot, rem)
}

/// Outcome of dividing a [`ZAPoly`] by [p]².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2Division {
    pub quotient: ZAPoly,
    pub remainder: ZAPoly,
    pub exact: bool,
}

impl Z2Division {
    pub fn quotient_integral(&self) -> bool {
        self.quotient.is_integral()
    }
}

pub fn divide_by_qnum_sq(f: &ZAPoly, p: u32) -> Z2Division {
    let divisor = qnum_squared_z2(p);
    let mut quot = Vec::new();
    let mut rem = Vec::new();
    for (&a, coeffs) in f.slices() {
        let (q, r) = div_rem_monic(coeffs, &divisor);
        quot.push((a, q));
        rem.push((a, r));
    }
    let remainder = ZAPoly::from_slices(rem);
    Z2Division {
        quotient: ZAPoly::from_slices(quot),
        exact: remainder.is_zero(),
        remainder,
    }
}

/// The "≡ 0 mod [p]²" verdict for a single polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceVerdict {
    /// `None` when f is outside ℚ[z², a^{±1}], with the reason.
    pub z2_form: std::result::Result<ZAPoly, String>,
    pub division: Option<Z2Division>,
}

impl CongruenceVerdict {
    pub fn in_subring(&self) -> bool {
        self.z2_form.is_ok()
    }

    pub fn integral(&self) -> bool {
        self.z2_form.as_ref().is_ok_and(ZAPoly::is_integral)
    }

    pub fn divisible(&self) -> bool {
        self.division
            .as_ref()
            .is_some_and(|d| d.exact && d.quotient_integral())
    }

    pub fn pass(&self) -> bool {
        self.integral() && self.divisible()
    }

    pub fn quotient(&self) -> Option<&ZAPoly> {
        self.division
            .as_ref()
            .filter(|d| d.exact)
            .map(|d| &d.quotient)
    }

    pub fn remainder_witness(&self) -> Option<&ZAPoly> {
        self.division
            .as_ref()
            .filter(|d| !d.exact)
            .map(|d| &d.remainder)
    }
}

/// PASS iff f ∈ ℤ[z², a^{±1}] and [p]² divides f there.
pub fn congruence_verdict(f: &LaurentQA, p: u32) -> CongruenceVerdict {
    match to_z2(f) {
        Ok(z) => {
            let division = divide_by_qnum_sq(&z, p);
            CongruenceVerdict {
                z2_form: Ok(z),
                division: Some(division),
            }
        }
        Err(e) => CongruenceVerdict {
            z2_form: Err(e.to_string()),
            division: None,
        },
    }
}
