//! Degree-truncated framed LMOV integrality.
//!
//! Series in the power sums p_μ(x) are stored in the basis p_μ/{μ}, which is
//! multiplicative because {α ∪ β} = {α}{β}. In that basis the framed
//! partition function of a torus knot has Laurent coefficients
//! (−1)^{τ|μ|} Ž_μ / z_μ, so log and exp never leave Laurent polynomials.
//!
//! From F = log Z = Σ_d (1/d) Σ_λ f_λ(q^d, a^d) s_λ(x^d):
//!
//! - h_μ = Σ_{d | gcd μ} (möb(d)/d) Ψ_d(F_{μ/d}), with F_μ the p_μ-coefficient,
//! - f_λ = Σ_ν χ_λ(ν) h_ν,
//! - f̂_μ = Σ_λ f_λ (M^{−1})_{λμ}, tested for z² f̂_μ ∈ ℤ[z², a^{±1}].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    character_table, divisors, mobius, partitions_of, partitions_up_to, Partition,
};
use crate::error::{Error, Result};
use crate::exactring::{bracket_of_partition_poly, rat, LaurentQA, QPoly, RingFraction};
use crate::torus::{common_denominator, zcheck_general, TorusKnot};
use crate::zbasis::{to_z2, z_squared, ZAPoly};

/// Truncated series Σ_{|μ|≤D} c_μ p_μ/{μ}; the empty partition holds the constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSeries {
    degree: u32,
    coeffs: BTreeMap<Partition, LaurentQA>,
}

impl PSeries {
    pub fn zero(degree: u32) -> Self {
        PSeries {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(degree: u32) -> Self {
        Self::constant(degree, LaurentQA::one())
    }

    pub fn constant(degree: u32, c: LaurentQA) -> Self {
        let mut s = Self::zero(degree);
        s.set(Partition::empty(), c);
        s
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Sets the coefficient of p_μ/{μ}. Terms above the truncation degree are dropped.
    pub fn set(&mut self, mu: Partition, c: LaurentQA) {
        if mu.weight() > self.degree || c.is_zero() {
            self.coeffs.remove(&mu);
        } else {
            self.coeffs.insert(mu, c);
        }
    }

    /// Coefficient of p_μ/{μ}.
    pub fn coeff(&self, mu: &Partition) -> LaurentQA {
        self.coeffs.get(mu).cloned().unwrap_or_default()
    }

    /// Coefficient of p_μ itself, c_μ/{μ}.
    pub fn coeff_p(&self, mu: &Partition) -> RingFraction {
        RingFraction::new(self.coeff(mu), bracket_of_partition_poly(mu, 1))
            .expect("nonzero bracket")
    }

    pub fn constant_term(&self) -> LaurentQA {
        self.coeff(&Partition::empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &LaurentQA)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        PSeries {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.scale(s)))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &PSeries) -> Self {
        let mut out = self.clone();
        out.degree = self.degree.min(rhs.degree);
        out.coeffs.retain(|k, _| k.weight() <= out.degree);
        for (k, v) in &rhs.coeffs {
            let sum = &out.coeff(k) + v;
            out.set(k.clone(), sum);
        }
        out
    }

    pub fn sub(&self, rhs: &PSeries) -> Self {
        self.add(&rhs.scale(&rat(-1)))
    }

    pub fn mul(&self, rhs: &PSeries) -> Self {
        let degree = self.degree.min(rhs.degree);
        let mut acc: BTreeMap<Partition, LaurentQA> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                if a.weight() + b.weight() > degree {
                    continue;
                }
                *acc.entry(a.union(b)).or_default() += &(ca * cb);
            }
        }
        let mut out = PSeries::zero(degree);
        for (k, v) in acc {
            out.set(k, v);
        }
        out
    }

    /// Truncated log; needs constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != LaurentQA::one() {
            return Err(Error::PreconditionViolated(
                "log needs constant term 1".into(),
            ));
        }
        let x = self.sub(&PSeries::one(self.degree));
        let mut power = x.clone();
        let mut out = PSeries::zero(self.degree);
        for k in 1..=self.degree as i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&BigRational::new(sign.into(), k.into())));
            power = power.mul(&x);
        }
        Ok(out)
    }

    /// Truncated exp; needs constant term 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::PreconditionViolated(
                "exp needs constant term 0".into(),
            ));
        }
        let mut out = PSeries::one(self.degree);
        let mut power = PSeries::one(self.degree);
        let mut fact = BigInt::one();
        for k in 1..=self.degree {
            power = power.mul(self);
            fact *= k;
            out = out.add(&power.scale(&BigRational::new(BigInt::one(), fact.clone())));
        }
        Ok(out)
    }
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, v)| format!("({v}) p[{k}]/{{{k}}}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Z = 1 + Σ_{1≤|μ|≤D} (−1)^{τ|μ|} Z_μ(K)/z_μ · p_μ.
pub fn partition_function(knot: &TorusKnot, degree: u32) -> Result<PSeries> {
    let tau = knot.framing();
    let mut z = PSeries::one(degree);
    for mu in partitions_up_to(degree)
        .into_iter()
        .filter(|mu| !mu.is_empty())
    {
        let value = zcheck_general(knot, &mu)?;
        let reformulated =
            value
                .reformulated()
                .cloned()
                .ok_or_else(|| Error::NonExactDivision {
                    a_exp: 0,
                    remainder: format!("{{{mu}}} Z_{mu}({knot}) is not a Laurent polynomial"),
                })?;
        let sign = if tau * mu.weight() as i64 % 2 == 0 {
            1
        } else {
            -1
        };
        z.set(
            mu.clone(),
            reformulated.scale(&BigRational::new(sign.into(), BigInt::from(mu.z()))),
        );
    }
    Ok(z)
}

pub fn free_energy(z: &PSeries) -> Result<PSeries> {
    z.log()
}

/// h_μ {μ} = Σ_{d | gcd μ} (möb(d)/d) Ψ_d(F_{μ/d} {μ/d}).
///
/// Ψ_d(g/{ν}) = Ψ_d(g)/{dν}, so the inversion runs directly on the stored coefficients.
pub fn plethystic_inverse(f: &PSeries) -> PSeries {
    let mut h = PSeries::zero(f.degree());
    for mu in partitions_up_to(f.degree())
        .into_iter()
        .filter(|mu| !mu.is_empty())
    {
        let mut acc = LaurentQA::zero();
        for d in divisors(mu.parts_gcd()) {
            let md = mobius(d);
            if md == 0 {
                continue;
            }
            let inner = f.coeff(&mu.divided(d).expect("d divides every part"));
            acc += &inner
                .adams(d as i64)
                .scale(&BigRational::new(md.into(), (d as i64).into()));
        }
        h.set(mu, acc);
    }
    h
}

/// Inverse of [`plethystic_inverse`]: F_μ {μ} = Σ_{d | gcd μ} (1/d) Ψ_d(h_{μ/d} {μ/d}).
pub fn plethystic_forward(h: &PSeries) -> PSeries {
    let mut f = PSeries::zero(h.degree());
    for mu in partitions_up_to(h.degree())
        .into_iter()
        .filter(|mu| !mu.is_empty())
    {
        let mut acc = LaurentQA::zero();
        for d in divisors(mu.parts_gcd()) {
            let inner = h.coeff(&mu.divided(d).expect("d divides every part"));
            acc += &inner
                .adams(d as i64)
                .scale(&BigRational::new(1.into(), (d as i64).into()));
        }
        f.set(mu, acc);
    }
    f
}

/// f_λ = Σ_ν χ_λ(ν) h_ν for every 1 ≤ |λ| ≤ D, each over the common denominator C_{|λ|}.
pub fn extract_f(f: &PSeries) -> BTreeMap<Partition, RingFraction> {
    let h = plethystic_inverse(f);
    let mut out = BTreeMap::new();
    for n in 1..=f.degree() {
        let table = character_table(n);
        let c_n = common_denominator(n).to_qpoly();
        for lambda in table.partitions() {
            let mut num = LaurentQA::zero();
            for nu in table.partitions() {
                let c = table.get(lambda, nu);
                let h_nu = h.coeff(nu);
                if c == 0 || h_nu.is_zero() {
                    continue;
                }
                let cof = c_n
                    .div_exact(&bracket_of_partition_poly(nu, 1))
                    .expect("{ν} divides C_n");
                num += &(&h_nu * &LaurentQA::from_qpoly(&cof.scale(&rat(c))));
            }
            out.insert(
                lambda.clone(),
                RingFraction::new(num, c_n.clone()).expect("C_n is nonzero"),
            );
        }
    }
    out
}

/// Rebuilds F from the f_λ: h_ν = (1/z_ν) Σ_λ χ_λ(ν) f_λ, then the forward plethystic sum.
pub fn reassemble(f_lambda: &BTreeMap<Partition, RingFraction>, degree: u32) -> Result<PSeries> {
    let mut h = PSeries::zero(degree);
    for n in 1..=degree {
        let table = character_table(n);
        for nu in table.partitions() {
            let mut acc = RingFraction::zero();
            for lambda in table.partitions() {
                let c = table.get(lambda, nu);
                if let (Some(fl), true) = (f_lambda.get(lambda), c != 0) {
                    acc = &acc + &fl.scale(&rat(c));
                }
            }
            let h_nu = acc
                .scale(&BigRational::new(BigInt::one(), BigInt::from(nu.z())))
                .mul_poly(&LaurentQA::from_qpoly(&bracket_of_partition_poly(nu, 1)))
                .resolve()?;
            h.set(nu.clone(), h_nu);
        }
    }
    Ok(plethystic_forward(&h))
}

fn check_weights(lambda: &Partition, mu: &Partition) -> Result<()> {
    if lambda.weight() != mu.weight() {
        return Err(Error::WeightMismatch {
            left: lambda.clone(),
            right: mu.clone(),
        });
    }
    Ok(())
}

/// M_{λμ} = Σ_ν χ_λ(ν) χ_μ(ν) {ν} / z_ν.
pub fn m_matrix(lambda: &Partition, mu: &Partition) -> Result<RingFraction> {
    check_weights(lambda, mu)?;
    let table = character_table(lambda.weight());
    let mut out = QPoly::zero();
    for nu in table.partitions() {
        let c = table.get(lambda, nu) * table.get(mu, nu);
        if c != 0 {
            let w = BigRational::new(c.into(), BigInt::from(nu.z()));
            out = &out + &bracket_of_partition_poly(nu, 1).scale(&w);
        }
    }
    Ok(RingFraction::from_poly(LaurentQA::from_qpoly(&out)))
}

/// (M^{−1})_{λμ} = Σ_ν χ_λ(ν) χ_μ(ν) / (z_ν {ν}), over the denominator C_n.
pub fn m_inverse(lambda: &Partition, mu: &Partition) -> Result<RingFraction> {
    check_weights(lambda, mu)?;
    let n = lambda.weight();
    if n == 0 {
        return Ok(RingFraction::one());
    }
    let table = character_table(n);
    let c_n = common_denominator(n).to_qpoly();
    let mut num = QPoly::zero();
    for nu in table.partitions() {
        let c = table.get(lambda, nu) * table.get(mu, nu);
        if c != 0 {
            let cof = c_n
                .div_exact(&bracket_of_partition_poly(nu, 1))
                .expect("{ν} divides C_n");
            num = &num + &cof.scale(&BigRational::new(c.into(), BigInt::from(nu.z())));
        }
    }
    RingFraction::new(LaurentQA::from_qpoly(&num), c_n)
}

/// Σ_σ M_{λσ} (M^{−1})_{σμ} = δ_{λμ} for all λ, μ ⊢ n.
pub fn m_times_inverse_is_identity(n: u32) -> Result<bool> {
    let parts = partitions_of(n);
    for lambda in &parts {
        for mu in &parts {
            let mut acc = RingFraction::zero();
            for sigma in &parts {
                acc = &acc + &(&m_matrix(lambda, sigma)? * &m_inverse(sigma, mu)?);
            }
            let expected = if lambda == mu {
                RingFraction::one()
            } else {
                RingFraction::zero()
            };
            if acc != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The integrality verdict for one μ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmovVerdict {
    pub mu: Partition,
    pub pass: bool,
    /// z² f̂_μ in the z²-basis, when it lies in ℚ[z², a^{±1}].
    pub z2_fhat: Option<ZAPoly>,
}

/// f̂_μ for every 1 ≤ |μ| ≤ D.
pub fn fhat_all(
    f_lambda: &BTreeMap<Partition, RingFraction>,
    degree: u32,
) -> Result<BTreeMap<Partition, RingFraction>> {
    let mut out = BTreeMap::new();
    for n in 1..=degree {
        let parts = partitions_of(n);
        for mu in &parts {
            let mut acc = RingFraction::zero();
            for lambda in &parts {
                if let Some(fl) = f_lambda.get(lambda) {
                    acc = &acc + &(fl * &m_inverse(lambda, mu)?);
                }
            }
            out.insert(mu.clone(), acc);
        }
    }
    Ok(out)
}

/// f̂_μ = Σ_ν χ_μ(ν) h_ν / {ν}, the closed form through character orthogonality.
pub fn fhat_closed_form(f: &PSeries, mu: &Partition) -> RingFraction {
    let h = plethystic_inverse(f);
    let table = character_table(mu.weight());
    table
        .partitions()
        .iter()
        .filter(|nu| table.get(mu, nu) != 0)
        .map(|nu| {
            let den = bracket_of_partition_poly(nu, 1).pow(2);
            RingFraction::new(h.coeff(nu).scale(&rat(table.get(mu, nu))), den)
                .expect("nonzero bracket")
        })
        .sum()
}

fn verdict_for(mu: &Partition, fhat: &RingFraction) -> LmovVerdict {
    let z2 = fhat
        .mul_poly(&z_squared())
        .resolve()
        .ok()
        .and_then(|f| to_z2(&f).ok());
    LmovVerdict {
        mu: mu.clone(),
        pass: z2.as_ref().is_some_and(ZAPoly::is_integral),
        z2_fhat: z2,
    }
}

/// Everything the integrality check computes for one knot up to degree D.
#[derive(Clone, Debug)]
pub struct LmovAnalysis {
    pub knot: TorusKnot,
    pub partition_function: PSeries,
    pub free_energy: PSeries,
    pub f_lambda: BTreeMap<Partition, RingFraction>,
    pub fhat: BTreeMap<Partition, RingFraction>,
}

impl LmovAnalysis {
    pub fn new(knot: &TorusKnot, degree: u32) -> Result<Self> {
        let z = partition_function(knot, degree)?;
        let f = free_energy(&z)?;
        let f_lambda = extract_f(&f);
        let fhat = fhat_all(&f_lambda, degree)?;
        Ok(LmovAnalysis {
            knot: *knot,
            partition_function: z,
            free_energy: f,
            f_lambda,
            fhat,
        })
    }

    pub fn verdicts(&self) -> Vec<LmovVerdict> {
        self.fhat
            .iter()
            .map(|(mu, fh)| verdict_for(mu, fh))
            .collect()
    }

    pub fn verdict(&self, mu: &Partition) -> Option<LmovVerdict> {
        self.fhat.get(mu).map(|fh| verdict_for(mu, fh))
    }
}

/// f̂_μ ∈ z^{−2} ℤ[z², a^{±1}] for the knot, computed at degree |μ|.
pub fn lmov_verdict(knot: &TorusKnot, mu: &Partition) -> Result<LmovVerdict> {
    if mu.is_empty() {
        return Ok(LmovVerdict {
            mu: mu.clone(),
            pass: true,
            z2_fhat: Some(ZAPoly::zero()),
        });
    }
    let analysis = LmovAnalysis::new(knot, mu.weight())?;
    Ok(analysis
        .verdict(mu)
        .expect("μ is within the truncation degree"))
}

/// The verdict for arbitrary f̂ data, used when f̂ is already known.
pub fn verdict_from_fhat(mu: &Partition, fhat: &RingFraction) -> LmovVerdict {
    verdict_for(mu, fhat)
}

impl LmovVerdict {
    pub fn is_zero(&self) -> bool {
        self.z2_fhat.as_ref().is_some_and(ZAPoly::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{abracket, qbracket_poly};

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn series_arithmetic() {
        let mut x = PSeries::zero(3);
        x.set(part(&[1]), LaurentQA::a(1));
        let sq = x.mul(&x);
        assert_eq!(sq.coeff(&part(&[1, 1])), LaurentQA::a(2));
        assert!(sq.mul(&sq).is_zero());
        let z = PSeries::one(3).add(&x);
        let f = z.log().unwrap();
        assert_eq!(f.coeff(&part(&[1])), LaurentQA::a(1));
        assert_eq!(
            f.coeff(&part(&[1, 1])),
            LaurentQA::a(2).scale(&BigRational::new((-1).into(), 2.into()))
        );
        assert_eq!(f.exp().unwrap(), z);
        assert!(PSeries::one(3).log().unwrap().is_zero());
    }

    #[test]
    fn unknot_partition_function() {
        let z = partition_function(&TorusKnot::unknot(0), 2).unwrap();
        assert_eq!(z.constant_term(), LaurentQA::one());
        assert_eq!(
            z.coeff_p(&part(&[1])),
            RingFraction::new(abracket(1), qbracket_poly(1)).unwrap()
        );
    }

    #[test]
    fn unknot_free_energy_collapses() {
        let f = free_energy(&partition_function(&TorusKnot::unknot(0), 3).unwrap()).unwrap();
        for mu in partitions_up_to(3).into_iter().filter(|m| !m.is_empty()) {
            let expected = if mu.len() == 1 {
                let d = mu.parts()[0] as i64;
                abracket(d).scale(&BigRational::new(1.into(), d.into()))
            } else {
                LaurentQA::zero()
            };
            assert_eq!(f.coeff(&mu), expected, "mu = {mu}");
        }
        let fl = extract_f(&f);
        assert_eq!(
            fl[&part(&[1])],
            RingFraction::new(abracket(1), qbracket_poly(1)).unwrap()
        );
        for (lambda, v) in &fl {
            if lambda.weight() >= 2 {
                assert!(v.is_zero(), "f_{lambda}");
            }
        }
        assert_eq!(reassemble(&fl, 3).unwrap(), f);
    }

    #[test]
    fn m_examples() {
        assert_eq!(
            m_matrix(&part(&[1]), &part(&[1])).unwrap(),
            RingFraction::from_poly(LaurentQA::from_qpoly(&qbracket_poly(1)))
        );
        assert_eq!(
            m_inverse(&part(&[1]), &part(&[1])).unwrap(),
            RingFraction::inverse_of_qpoly(qbracket_poly(1)).unwrap()
        );
        let m22 = (&qbracket_poly(2) + &qbracket_poly(1).pow(2))
            .scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(
            m_matrix(&part(&[2]), &part(&[2])).unwrap(),
            RingFraction::from_poly(LaurentQA::from_qpoly(&m22))
        );
        assert!(matches!(
            m_matrix(&part(&[2]), &part(&[1])),
            Err(Error::WeightMismatch { .. })
        ));
        for n in 1..=3 {
            assert!(m_times_inverse_is_identity(n).unwrap());
        }
    }

    #[test]
    fn unknot_verdicts() {
        let analysis = LmovAnalysis::new(&TorusKnot::unknot(0), 3).unwrap();
        let v = analysis.verdict(&part(&[1])).unwrap();
        assert!(v.pass);
        assert_eq!(v.z2_fhat.unwrap().to_laurent(), abracket(1));
        for v in analysis.verdicts() {
            assert!(v.pass, "{}", v.mu);
        }
    }

    #[test]
    fn trefoil_verdicts() {
        let analysis = LmovAnalysis::new(&TorusKnot::new(2, 3).unwrap(), 3).unwrap();
        for v in analysis.verdicts() {
            assert!(v.pass, "{}", v.mu);
            assert_eq!(
                analysis.fhat[&v.mu],
                fhat_closed_form(&analysis.free_energy, &v.mu)
            );
        }
    }

    #[test]
    fn zero_data_passes() {
        let fh = RingFraction::zero();
        let v = verdict_from_fhat(&part(&[2]), &fh);
        assert!(v.pass && v.is_zero());
    }
}
