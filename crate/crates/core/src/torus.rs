//! Colored HOMFLY-PT values of torus knots T(d, m) and framed unknots.
//!
//! Two independent evaluation paths are provided:
//!
//! - [`zcheck`]: the closed single-row formula
//!   Ž_p = {p} a^{pm} Σ_{|μ|=pd} {μ}_a / (z_μ {μ}) · {pmμ}/{pm},
//!   computed with integer arithmetic and one exact division by
//!   Q_m(q^p) = {pm}/{p}.
//! - [`zcheck_general`]: any color μ, by cabling P_μ ↦ P_{dμ}, applying the
//!   fractional twist Q_λ ↦ (q^{κ_λ} a^{|λ|})^{m/d} Q_λ, and evaluating each
//!   P_ν in the plane as Π {ν_j}_a/{ν_j}.
//!
//! Every sum over partitions ν ⊢ N is collected over the common denominator
//! C_N = Π_{k≤N} {k}^{⌊N/k⌋}, which every {ν} divides termwise.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{character_table, chi, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::exactring::{
    abracket_of_partition, bracket_of_partition_poly, divide_out_abracket, inv_rat, qbracket_poly,
    LaurentQA, QExp, QPoly, RingFraction, ZPoly,
};
use crate::zbasis::{to_z2, ZAPoly};

/// The (d, m) torus knot with its canonical framing d·m.
///
/// `T(1, m)` is the unknot with framing m. Negative m gives the mirror.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusKnot {
    d: u32,
    m: i64,
}

impl TorusKnot {
    pub fn new(d: u32, m: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidKnot {
                d,
                m,
                reason: "need at least one strand".into(),
            });
        }
        if (d as i64).gcd(&m) != 1 {
            return Err(Error::InvalidKnot {
                d,
                m,
                reason: "d and m must be coprime".into(),
            });
        }
        Ok(TorusKnot { d, m })
    }

    /// Framed unknot with the given framing.
    pub fn unknot(framing: i64) -> Self {
        TorusKnot { d: 1, m: framing }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// τ = d·m
    pub fn framing(&self) -> i64 {
        self.d as i64 * self.m
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.d, self.m)
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn zpoly_of_abracket(mu: &Partition) -> ZPoly {
    // {μ}_a as an integer polynomial in a
    mu.parts().iter().fold(ZPoly::one(), |acc, &k| {
        acc.mul(&ZPoly::from_coeffs(-(k as i64), bracket_coeffs(k)))
    })
}

fn bracket_coeffs(k: u32) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); 2 * k as usize + 1];
    c[0] = -BigInt::one();
    c[2 * k as usize] = BigInt::one();
    c
}

fn zpoly_qbracket(k: u32) -> ZPoly {
    ZPoly::from_coeffs(-(k as i64), bracket_coeffs(k))
}

/// C_N = Π_{k=1}^{N} {k}^{⌊N/k⌋}.
pub fn common_denominator(n: u32) -> ZPoly {
    (1..=n).fold(ZPoly::one(), |acc, k| {
        (0..n / k).fold(acc, |acc, _| acc.mul(&zpoly_qbracket(k)))
    })
}

/// C_N / {ν}, formed without division.
fn cofactor(n: u32, nu: &Partition) -> ZPoly {
    let mult = nu.multiplicities();
    (1..=n).fold(ZPoly::one(), |acc, k| {
        let e = n / k - mult.get(&k).copied().unwrap_or(0);
        (0..e).fold(acc, |acc, _| acc.mul(&zpoly_qbracket(k)))
    })
}

/// Σ_{ν⊢N} (1/z_ν) {ν}_a (C_N/{ν}) Φ(ν) / scale, kept as integer slices over L·scale.
struct PlaneSum {
    weight: u32,
    /// a-exponent → integer q-polynomial
    slices: BTreeMap<i64, ZPoly>,
    /// the slices are to be divided by this integer
    int_den: BigInt,
}

impl PlaneSum {
    fn collect(weight: u32, scale: &BigInt, mut phi: impl FnMut(&Partition) -> ZPoly) -> Self {
        let l = factorial(weight);
        let mut slices: BTreeMap<i64, ZPoly> = BTreeMap::new();
        for nu in partitions_of(weight) {
            let phi_nu = phi(&nu);
            if phi_nu.is_zero() {
                continue;
            }
            let q_part = cofactor(weight, &nu).mul(&phi_nu);
            let weight_factor = &l / BigInt::from(nu.z());
            for (a_exp, c) in zpoly_of_abracket(&nu).terms() {
                slices
                    .entry(a_exp)
                    .or_default()
                    .add_scaled(&q_part, &(c * &weight_factor));
            }
        }
        slices.retain(|_, p| !p.is_zero());
        PlaneSum {
            weight,
            slices,
            int_den: l * scale,
        }
    }

    fn numerator(&self, a_shift: i64) -> LaurentQA {
        let qpolys: Vec<(i64, QPoly)> = self
            .slices
            .iter()
            .map(|(&a, p)| (a + a_shift, p.to_qpoly_over(&self.int_den)))
            .collect();
        LaurentQA::from_a_slices(qpolys.iter().map(|(a, p)| (*a, p)))
    }

    fn to_fraction(&self, a_shift: i64) -> RingFraction {
        RingFraction::new(
            self.numerator(a_shift),
            common_denominator(self.weight).to_qpoly(),
        )
        .expect("C_N is nonzero")
    }

    /// (factor · sum) / C_N as a Laurent polynomial, when the division is exact.
    fn resolve_times(&self, factor: &ZPoly, a_shift: i64) -> Option<LaurentQA> {
        let c_n = common_denominator(self.weight);
        let mut qpolys = Vec::new();
        for (&a, p) in &self.slices {
            let quot = factor.mul(p).div_exact(&c_n)?;
            qpolys.push((a + a_shift, quot.to_qpoly_over(&self.int_den)));
        }
        Some(LaurentQA::from_a_slices(
            qpolys.iter().map(|(a, p)| (*a, p)),
        ))
    }
}

/// φ_{μ,ν}(x) = Σ_λ χ_λ(μ) χ_λ(ν) x^{κ_λ}, with x written as q.
pub fn phi(mu: &Partition, nu: &Partition) -> Result<LaurentQA> {
    if mu.weight() != nu.weight() {
        return Err(Error::WeightMismatch {
            left: mu.clone(),
            right: nu.clone(),
        });
    }
    let table = character_table(mu.weight());
    let mut out = LaurentQA::zero();
    for lambda in table.partitions() {
        let c = table.get(lambda, mu) * table.get(lambda, nu);
        if c != 0 {
            out.add_term(
                0,
                QExp::int(lambda.kappa()),
                BigRational::from_integer(c.into()),
            );
        }
    }
    Ok(out)
}

/// Π (x^{dν_i} − x^{−dν_i}) / (x^d − x^{−d}), resolved.
pub fn phi_row_closed_form(d: u32, nu: &Partition) -> Result<LaurentQA> {
    RingFraction::new(
        LaurentQA::from_qpoly(&bracket_of_partition_poly(nu, d as i64)),
        qbracket_poly(d as i64),
    )?
    .resolve()
}

/// The fractional twist of P_{kd}: coefficients over P_μ, |μ| = kd,
/// a^{km} {kmμ} / (z_μ {km}).
pub fn twist_power_sum(k: u32, d: u32, m: i64) -> Result<Vec<(Partition, RingFraction)>> {
    if (d as i64).gcd(&m) != 1 {
        return Err(Error::InvalidKnot {
            d,
            m,
            reason: "d and m must be coprime".into(),
        });
    }
    let n = k * d;
    if m == 0 {
        // identity twist
        return Ok(vec![(Partition::row(n), RingFraction::one())]);
    }
    let km = k as i64 * m;
    partitions_of(n)
        .into_iter()
        .map(|mu| {
            let num = LaurentQA::from_qpoly(&bracket_of_partition_poly(&mu, km))
                .shift(QExp::ZERO, km)
                .scale(&inv_rat(mu.z()));
            Ok((mu, RingFraction::new(num, qbracket_poly(km))?))
        })
        .collect()
}

/// ⟨P_μ⟩ = Π {μ_i}_a / {μ_i}.
pub fn plane_power_sum(mu: &Partition) -> RingFraction {
    RingFraction::new(
        abracket_of_partition(mu, 1),
        bracket_of_partition_poly(mu, 1),
    )
    .expect("nonzero bracket")
}

/// Evaluates a P-basis combination in the plane.
pub fn plane_eval(terms: &[(Partition, RingFraction)]) -> RingFraction {
    terms.iter().map(|(mu, c)| c * &plane_power_sum(mu)).sum()
}

/// Ž_p(T) from the closed single-row formula. Requires m ≠ 0.
pub fn zcheck(knot: &TorusKnot, p: u32) -> Result<LaurentQA> {
    if p == 0 {
        return Err(Error::PreconditionViolated("p must be positive".into()));
    }
    if knot.m == 0 {
        return Err(Error::PreconditionViolated(
            "closed formula needs m != 0; use zcheck_general".into(),
        ));
    }
    let n = p * knot.d;
    let pm = p as i64 * knot.m;
    let l = factorial(n);
    let mut slices: BTreeMap<i64, ZPoly> = BTreeMap::new();
    for mu in partitions_of(n) {
        // {pmμ}/{μ} = Π Q_{pm}(q^{μ_i})
        let q_part = mu.parts().iter().fold(ZPoly::one(), |acc, &k| {
            acc.mul(&ZPoly::qratio(pm, k as i64))
        });
        let weight_factor = &l / BigInt::from(mu.z());
        for (a_exp, c) in zpoly_of_abracket(&mu).terms() {
            slices
                .entry(a_exp)
                .or_default()
                .add_scaled(&q_part, &(c * &weight_factor));
        }
    }
    // {p}/{pm} = 1 / Q_m(q^p)
    let divisor = ZPoly::qratio(knot.m, p as i64);
    let mut out = Vec::new();
    for (a_exp, slice) in slices {
        if slice.is_zero() {
            continue;
        }
        let quot = slice
            .div_exact(&divisor)
            .ok_or_else(|| Error::NonExactDivision {
                a_exp: a_exp + pm,
                remainder: format!(
                    "Q_{}(q^{}) does not divide the a^{} slice",
                    knot.m,
                    p,
                    a_exp + pm
                ),
            })?;
        out.push((a_exp + pm, quot.to_qpoly_over(&l)));
    }
    Ok(LaurentQA::from_a_slices(out.iter().map(|(a, q)| (*a, q))))
}

/// Z_μ(T) = H(T ⋆ P_μ) as a fraction over q-only denominators.
///
/// When {μ}·Z_μ is a Laurent polynomial the result is stored as
/// Ž_μ / {μ}, which is what [`ColoredValue::reformulated`] returns.
#[derive(Clone, Debug)]
pub struct ColoredValue {
    pub knot: TorusKnot,
    pub color: Partition,
    value: RingFraction,
    reformulated: Option<LaurentQA>,
}

impl ColoredValue {
    pub fn value(&self) -> &RingFraction {
        &self.value
    }

    /// Ž_μ = {μ} Z_μ, when it is a Laurent polynomial.
    pub fn reformulated(&self) -> Option<&LaurentQA> {
        self.reformulated.as_ref()
    }
}

/// φ_{dμ,ν}(q^{m/d}) split into its integer-exponent part (as a [`ZPoly`])
/// and whatever carries a fractional exponent.
fn twisted_phi(
    rows: &[(Partition, i64)],
    nu: &Partition,
    m: i64,
    d: u32,
    weight: u32,
) -> (ZPoly, LaurentQA) {
    let table = character_table(weight);
    let mut int_terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut frac = LaurentQA::zero();
    for (lambda, c_lambda) in rows {
        let c = c_lambda * table.get(lambda, nu);
        if c == 0 {
            continue;
        }
        let e = QExp::new(lambda.kappa() * m, d as i64);
        match e.to_integer() {
            Some(e) => *int_terms.entry(e).or_default() += c,
            None => frac.add_term(0, e, BigRational::from_integer(c.into())),
        }
    }
    let zp = match (int_terms.keys().next(), int_terms.keys().next_back()) {
        (Some(&lo), Some(&hi)) => {
            let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
            for (e, c) in int_terms {
                coeffs[(e - lo) as usize] = c;
            }
            ZPoly::from_coeffs(lo, coeffs)
        }
        _ => ZPoly::zero(),
    };
    (zp, frac)
}

/// H(T ⋆ P_μ) via cabling P_μ ↦ P_{dμ}, the fractional twist, and plane evaluation.
pub fn zcheck_general(knot: &TorusKnot, mu: &Partition) -> Result<ColoredValue> {
    if mu.is_empty() {
        return Ok(ColoredValue {
            knot: *knot,
            color: mu.clone(),
            value: RingFraction::one(),
            reformulated: Some(LaurentQA::one()),
        });
    }
    let n = knot.d * mu.weight();
    let cabled = mu.scaled(knot.d);
    let table = character_table(n);
    let rows: Vec<(Partition, i64)> = table
        .partitions()
        .iter()
        .map(|lambda| (lambda.clone(), table.get(lambda, &cabled)))
        .filter(|(_, c)| *c != 0)
        .collect();
    let a_shift = mu.weight() as i64 * knot.m;

    let mut frac_total = LaurentQA::zero();
    let sum = PlaneSum::collect(n, &BigInt::one(), |nu| {
        let (int_part, frac) = twisted_phi(&rows, nu, knot.m, knot.d, n);
        if !frac.is_zero() {
            // same summand as the integer part, kept symbolically
            let summand = &(&frac * &abracket_of_partition(nu, 1))
                * &LaurentQA::from_qpoly(&cofactor(n, nu).to_qpoly());
            frac_total += &summand.scale(&inv_rat(nu.z()));
        }
        int_part
    });
    if !frac_total.is_zero() {
        return Err(Error::ResidualFractionalExponent {
            context: format!("Z_{mu}({knot})"),
        });
    }
    finish_colored(knot, mu, &sum, a_shift)
}

fn finish_colored(
    knot: &TorusKnot,
    mu: &Partition,
    sum: &PlaneSum,
    a_shift: i64,
) -> Result<ColoredValue> {
    let bracket = mu
        .parts()
        .iter()
        .fold(ZPoly::one(), |acc, &k| acc.mul(&zpoly_qbracket(k)));
    match sum.resolve_times(&bracket, a_shift) {
        Some(reformulated) => Ok(ColoredValue {
            knot: *knot,
            color: mu.clone(),
            value: RingFraction::new(reformulated.clone(), bracket.to_qpoly())?,
            reformulated: Some(reformulated),
        }),
        None => Ok(ColoredValue {
            knot: *knot,
            color: mu.clone(),
            value: sum.to_fraction(a_shift),
            reformulated: None,
        }),
    }
}

/// W_λ(U) = Σ_μ χ_λ(μ)/z_μ Π {μ_i}_a/{μ_i}.
pub fn unknot_w(lambda: &Partition) -> RingFraction {
    if lambda.is_empty() {
        return RingFraction::one();
    }
    let n = lambda.weight();
    let table = character_table(n);
    PlaneSum::collect(n, &BigInt::one(), |nu| {
        let c = table.get(lambda, nu);
        ZPoly::from_coeffs(0, vec![BigInt::from(c)])
    })
    .to_fraction(0)
}

/// H(T ⋆ Q_λ) = Σ_{μ⊢|λ|} χ_λ(μ)/z_μ · Z_μ(T), in the collected-sum form.
struct ColoredSchur {
    sum: PlaneSum,
    a_shift: i64,
}

fn colored_schur(knot: &TorusKnot, lambda: &Partition) -> Result<ColoredSchur> {
    let n_color = lambda.weight();
    let n = knot.d * n_color;
    let table = character_table(n);
    let colors: Vec<(Partition, i64, BigInt)> = partitions_of(n_color)
        .into_iter()
        .map(|mu| {
            let c = chi(lambda, &mu);
            let w = factorial(n_color) / BigInt::from(mu.z());
            (mu.scaled(knot.d), c, w)
        })
        .filter(|(_, c, _)| *c != 0)
        .collect();
    // rows weighted by Σ_μ χ_λ(μ) (n!/z_μ) χ_ρ(dμ)
    let mut weights: BTreeMap<Partition, BigInt> = BTreeMap::new();
    for rho in table.partitions() {
        let w: BigInt = colors
            .iter()
            .map(|(cab, c, zw)| zw * (c * table.get(rho, cab)))
            .sum();
        if !w.is_zero() {
            weights.insert(rho.clone(), w);
        }
    }
    let mut residual = false;
    let sum = PlaneSum::collect(n, &factorial(n_color), |nu| {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (rho, w) in &weights {
            let c = w * table.get(rho, nu);
            if c.is_zero() {
                continue;
            }
            let e = QExp::new(rho.kappa() * knot.m, knot.d as i64);
            match e.to_integer() {
                Some(e) => *terms.entry(e).or_default() += c,
                None => residual = true,
            }
        }
        match (terms.keys().next(), terms.keys().next_back()) {
            (Some(&lo), Some(&hi)) => {
                let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
                for (e, c) in terms {
                    coeffs[(e - lo) as usize] = c;
                }
                ZPoly::from_coeffs(lo, coeffs)
            }
            _ => ZPoly::zero(),
        }
    });
    if residual {
        return Err(Error::ResidualFractionalExponent {
            context: format!("H({knot} * Q_{lambda})"),
        });
    }
    Ok(ColoredSchur {
        sum,
        a_shift: n_color as i64 * knot.m,
    })
}

/// H(T ⋆ Q_λ) as a fraction.
pub fn colored_homfly(knot: &TorusKnot, lambda: &Partition) -> Result<RingFraction> {
    if lambda.is_empty() {
        return Ok(RingFraction::one());
    }
    let cs = colored_schur(knot, lambda)?;
    Ok(cs.sum.to_fraction(cs.a_shift))
}

/// lim_{a→1} N(q,a)/(a − a^{−1}) for the numerator of a collected sum,
/// together with the q-only denominator it sits over.
fn limit_parts(sum: &PlaneSum, a_shift: i64) -> Result<(QPoly, QPoly)> {
    let num = divide_out_abracket(&sum.numerator(a_shift))?
        .substitute_a_one()
        .to_qpoly()?;
    Ok((num, common_denominator(sum.weight).to_qpoly()))
}

/// A_λ(T; q) = lim_{a→1} W_λ(T)/W_λ(U), with W_λ(T) = q^{−κ_λ τ} a^{−|λ|τ} H(T ⋆ Q_λ).
pub fn colored_alexander(knot: &TorusKnot, lambda: &Partition) -> Result<LaurentQA> {
    let cs = colored_schur(knot, lambda)?;
    let (h_num, h_den) = limit_parts(&cs.sum, cs.a_shift)?;
    let n = lambda.weight();
    let table = character_table(n);
    let w = PlaneSum::collect(n, &BigInt::one(), |nu| {
        ZPoly::from_coeffs(0, vec![BigInt::from(table.get(lambda, nu))])
    });
    let (w_num, w_den) = limit_parts(&w, 0)?;
    if w_num.is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "W_{lambda}(U) has no (a - a^-1) limit"
        )));
    }
    let ratio =
        RingFraction::new(LaurentQA::from_qpoly(&(&h_num * &w_den)), &w_num * &h_den)?.resolve()?;
    Ok(ratio.shift(QExp::int(-lambda.kappa() * knot.framing()), 0))
}

/// Ž_p(T), using the closed formula when m ≠ 0 and the general route otherwise.
pub fn reformulated(knot: &TorusKnot, p: u32) -> Result<LaurentQA> {
    if knot.m != 0 {
        return zcheck(knot, p);
    }
    zcheck_general(knot, &Partition::row(p))?
        .reformulated()
        .cloned()
        .ok_or_else(|| Error::NonExactDivision {
            a_exp: 0,
            remainder: "reformulated value is not Laurent".into(),
        })
}

/// A(T; q) = lim_{a→1} Ž(T)/(a − a^{−1}), in the z²-basis.
pub fn alexander_torus(knot: &TorusKnot) -> Result<ZAPoly> {
    to_z2(&alexander_laurent(knot)?)
}

pub fn alexander_laurent(knot: &TorusKnot) -> Result<LaurentQA> {
    Ok(divide_out_abracket(&reformulated(knot, 1)?)?.substitute_a_one())
}

/// {1}{dm}/({d}{m}), the closed form for torus knots (1 for d = 1 or m = 0).
pub fn alexander_closed_form(knot: &TorusKnot) -> Result<LaurentQA> {
    if knot.d == 1 || knot.m == 0 {
        return Ok(LaurentQA::one());
    }
    let num = &qbracket_poly(1) * &qbracket_poly(knot.framing());
    let den = &qbracket_poly(knot.d as i64) * &qbracket_poly(knot.m);
    RingFraction::new(LaurentQA::from_qpoly(&num), den)?.resolve()
}
