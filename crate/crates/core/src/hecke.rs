//! The congruence g_p ≡ 0 mod [p]² for framed torus knots.
//!
//! g_p(T) = Ž_p(T) − (−1)^{(p−1)τ} Ψ_p(Ž(T)), τ = d·m, and
//! g_p = [p]² F_{p,d,m} with
//!
//! F_{p,d,m} = a^{pm} / ([p][pm]) · ( Σ_{μ⊢pd} {μ}_a/z_μ Π Q_{pm}(q^{μ_i})
//!                                   − s Σ_{ν⊢d} {pν}_a/z_ν Π Q_m(q^{pν_i}) ).
//!
//! F is computed here directly from that sum, independently of
//! [`crate::torus::zcheck`], so the identity check compares two routes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{is_prime, partitions_of, Partition};
use crate::error::{Error, Result};
use crate::exactring::{divide_out_abracket, eval_at_root_of_unity, LaurentQA, QPoly, ZPoly};
use crate::torus::{factorial, reformulated, TorusKnot};
use crate::zbasis::{congruence_verdict, to_z2, CongruenceVerdict, ZAPoly};

/// (−1)^{(p−1)dm}
pub fn hecke_sign(p: u32, knot: &TorusKnot) -> i64 {
    if (p as i64 - 1) * knot.framing() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// g_p(T) = Ž_p − (−1)^{(p−1)τ} Ψ_p(Ž).
pub fn g_p(knot: &TorusKnot, p: u32) -> Result<LaurentQA> {
    if p == 0 {
        return Err(Error::PreconditionViolated("p must be positive".into()));
    }
    let zp = reformulated(knot, p)?;
    let z1 = reformulated(knot, 1)?;
    Ok(&zp - &z1.adams(p as i64).scale_int(hecke_sign(p, knot)))
}

/// {cμ}_a as an integer polynomial in a.
fn abracket_zpoly(mu: &Partition, c: u32) -> ZPoly {
    mu.parts().iter().fold(ZPoly::one(), |acc, &k| {
        let k = (k * c) as usize;
        let mut coeffs = vec![BigInt::zero(); 2 * k + 1];
        coeffs[0] = -BigInt::one();
        coeffs[2 * k] = BigInt::one();
        acc.mul(&ZPoly::from_coeffs(-(k as i64), coeffs))
    })
}

fn qratio_product(n: i64, ks: impl IntoIterator<Item = i64>) -> ZPoly {
    ks.into_iter()
        .fold(ZPoly::one(), |acc, k| acc.mul(&ZPoly::qratio(n, k)))
}

fn slices_to_laurent(slices: BTreeMap<i64, ZPoly>, den: &BigInt, a_shift: i64) -> LaurentQA {
    let polys: Vec<(i64, QPoly)> = slices
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(a, p)| (a + a_shift, p.to_qpoly_over(den)))
        .collect();
    LaurentQA::from_a_slices(polys.iter().map(|(a, p)| (*a, p)))
}

/// The bracketed sum of F_{p,d,m} times (pd)!, per a-exponent, before the
/// division by [p][pm] and the shift by a^{pm}.
struct FSum {
    slices: BTreeMap<i64, ZPoly>,
    scale: BigInt,
    pm: i64,
    divisor: ZPoly,
}

fn f_sum(p: u32, d: u32, m: i64) -> Result<Option<FSum>> {
    let knot = TorusKnot::new(d, m)?;
    if p == 0 {
        return Err(Error::PreconditionViolated("p must be positive".into()));
    }
    if m == 0 {
        return Ok(None);
    }
    let pm = p as i64 * m;
    let s = hecke_sign(p, &knot);
    let l = factorial(p * d);
    let mut slices: BTreeMap<i64, ZPoly> = BTreeMap::new();
    for mu in partitions_of(p * d) {
        let q_part = qratio_product(pm, mu.parts().iter().map(|&k| k as i64));
        let w = &l / BigInt::from(mu.z());
        for (a, c) in abracket_zpoly(&mu, 1).terms() {
            slices.entry(a).or_default().add_scaled(&q_part, &(c * &w));
        }
    }
    for nu in partitions_of(d) {
        let q_part = qratio_product(m, nu.parts().iter().map(|&k| (p * k) as i64));
        let w = &l / BigInt::from(nu.z()) * s;
        for (a, c) in abracket_zpoly(&nu, p).terms() {
            slices.entry(a).or_default().add_scaled(&q_part, &-(c * &w));
        }
    }
    slices.retain(|_, z| !z.is_zero());
    let divisor = ZPoly::qratio(p as i64, 1).mul(&ZPoly::qratio(pm, 1));
    Ok(Some(FSum {
        slices,
        scale: l,
        pm,
        divisor,
    }))
}

/// F_{p,d,m}. Zero when m = 0, where both sums vanish identically.
///
/// For prime p this is a Laurent polynomial; for composite p the division
/// by [p][pm] may fail with [`Error::NonExactDivision`].
pub fn f_pdm(p: u32, d: u32, m: i64) -> Result<LaurentQA> {
    let Some(sum) = f_sum(p, d, m)? else {
        return Ok(LaurentQA::zero());
    };
    let mut out = BTreeMap::new();
    for (a, slice) in sum.slices {
        let quot = slice
            .div_exact(&sum.divisor)
            .ok_or_else(|| Error::NonExactDivision {
                a_exp: a + sum.pm,
                remainder: format!(
                    "[{p}][{}] does not divide the a^{} slice of F",
                    sum.pm,
                    a + sum.pm
                ),
            })?;
        out.insert(a, quot);
    }
    Ok(slices_to_laurent(out, &sum.scale, sum.pm))
}

/// g_p = [p]² F_{p,d,m}, checked as [p]·(bracketed sum) = [pm]·g_p per a-slice,
/// so it is meaningful even when F is not a Laurent polynomial.
pub fn identity_gp_eq_p2f(g: &LaurentQA, p: u32, d: u32, m: i64) -> Result<bool> {
    let Some(sum) = f_sum(p, d, m)? else {
        return Ok(g.is_zero());
    };
    let g_slices = g.a_slices()?;
    let keys_match = g_slices
        .keys()
        .copied()
        .eq(sum.slices.keys().map(|a| a + sum.pm));
    if !keys_match {
        return Ok(false);
    }
    let qp = ZPoly::qratio(p as i64, 1).to_qpoly();
    let qpm = ZPoly::qratio(sum.pm, 1).to_qpoly();
    Ok(sum.slices.iter().all(|(a, slice)| {
        &slice.to_qpoly_over(&sum.scale) * &qp == &g_slices[&(a + sum.pm)] * &qpm
    }))
}

/// Outcome of one check in a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
}

impl Check {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Check::Pass
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Pass => "PASS",
            Check::Fail => "FAIL",
        })
    }
}

/// Verdict record for one (T, p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub d: u32,
    pub m: i64,
    pub framing: i64,
    pub p: u32,
    pub p_prime: bool,
    pub a_factor: Check,
    pub z2_member: Check,
    pub p2_divisible: Check,
    pub quotient: Option<ZAPoly>,
    pub remainder_witness: Option<ZAPoly>,
    #[serde(rename = "identity_gp_eq_p2F")]
    pub identity_gp_eq_p2f: Check,
    pub millis: u64,
    /// [p]² also divides g_p/(a − a^{−1}) in ℤ[z², a^{±1}].
    #[serde(skip)]
    pub strong_factor: Option<Check>,
}

impl CongruenceReport {
    pub fn knot(&self) -> TorusKnot {
        TorusKnot::new(self.d, self.m).expect("report holds a valid knot")
    }

    pub fn passed(&self) -> bool {
        self.a_factor.passed() && self.z2_member.passed() && self.p2_divisible.passed()
    }

    pub fn verdict(&self) -> Check {
        Check::from_bool(self.passed())
    }
}

/// Runs the full pipeline for (T, p). Composite p is allowed.
pub fn verify_hecke(knot: &TorusKnot, p: u32) -> Result<CongruenceReport> {
    Ok(verify_hecke_with_gp(knot, p)?.0)
}

/// [`verify_hecke`], also handing back g_p for further checks.
pub fn verify_hecke_with_gp(knot: &TorusKnot, p: u32) -> Result<(CongruenceReport, LaurentQA)> {
    let start = Instant::now();
    let g = g_p(knot, p)?;
    let identity = identity_gp_eq_p2f(&g, p, knot.d(), knot.m())?;

    let a_quotient = divide_out_abracket(&g).ok();
    let verdict = congruence_verdict(&g, p);
    let strong = a_quotient
        .as_ref()
        .map(|h| Check::from_bool(congruence_verdict(h, p).pass()));

    let report = CongruenceReport {
        d: knot.d(),
        m: knot.m(),
        framing: knot.framing(),
        p,
        p_prime: is_prime(p),
        a_factor: Check::from_bool(a_quotient.is_some()),
        z2_member: Check::from_bool(verdict.integral()),
        p2_divisible: Check::from_bool(verdict.divisible()),
        quotient: verdict.quotient().cloned(),
        remainder_witness: witness(&verdict),
        identity_gp_eq_p2f: Check::from_bool(identity),
        millis: start.elapsed().as_millis() as u64,
        strong_factor: strong,
    };
    Ok((report, g))
}

fn witness(verdict: &CongruenceVerdict) -> Option<ZAPoly> {
    match &verdict.division {
        Some(d) if !d.exact => Some(d.remainder.clone()),
        // exact but rational: the quotient itself witnesses the failure
        Some(d) if !d.quotient_integral() => Some(d.quotient.clone()),
        _ => None,
    }
}

/// Largest |f| and |∂_q f| over the roots q = e^{iπs/p} of [p], gcd(s, 2p) = 1,
/// at `samples` seeded points a = e^{iθ}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleRootCheck {
    pub max_value: f64,
    pub max_derivative: f64,
}

impl DoubleRootCheck {
    pub fn within(&self, tol: f64) -> bool {
        self.max_value < tol && self.max_derivative < tol
    }
}

pub fn double_root_check(f: &LaurentQA, p: u32, seed: u64, samples: usize) -> DoubleRootCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p as i64;
    let mut out = DoubleRootCheck {
        max_value: 0.0,
        max_derivative: 0.0,
    };
    for _ in 0..samples {
        let a0 = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        for s in (1..2 * n).filter(|s| s.gcd(&(2 * n)) == 1) {
            let (v, dv) = eval_at_root_of_unity(f, s, n, a0);
            out.max_value = out.max_value.max(v.norm());
            out.max_derivative = out.max_derivative.max(dv.norm());
        }
    }
    out
}

/// Q_n(x^k) products divided by Q_{pm}(x)Q_p(x), or `None` if not exact.
fn divide_by_qpm_qp(num: &ZPoly, p: u32, pm: i64) -> Option<ZPoly> {
    num.div_exact(&ZPoly::qratio(pm, 1).mul(&ZPoly::qratio(p as i64, 1)))
}

/// f_{p,m,ν} = (Π Q_{pm}(x^{pν_i}) − s p^l Π Q_m(x^{pν_i})) / (p^l Q_{pm}(x) Q_p(x)),
/// with s = (−1)^{(p−1)dm}, d = |ν|.
pub fn lemma32_value(p: u32, m: i64, nu: &Partition) -> Result<Option<LaurentQA>> {
    let d = nu.weight();
    let knot = TorusKnot::new(d, m)?;
    let pm = p as i64 * m;
    let s = hecke_sign(p, &knot);
    let pl = BigInt::from(p).pow(nu.len() as u32);
    let mut num = qratio_product(pm, nu.parts().iter().map(|&k| (p * k) as i64));
    num.add_scaled(
        &qratio_product(m, nu.parts().iter().map(|&k| (p * k) as i64)),
        &-(&pl * s),
    );
    Ok(divide_by_qpm_qp(&num, p, pm).map(|q| LaurentQA::from_qpoly(&q.to_qpoly_over(&pl))))
}

/// Membership of f_{p,m,ν} in ℚ[z²].
pub fn lemma32_check(p: u32, m: i64, nu: &Partition, d: u32) -> Result<(bool, Option<ZAPoly>)> {
    if nu.weight() != d {
        return Err(Error::PreconditionViolated(format!("|{nu}| != {d}")));
    }
    Ok(match lemma32_value(p, m, nu)? {
        Some(f) => match to_z2(&f) {
            Ok(z) => (true, Some(z)),
            Err(_) => (false, None),
        },
        None => (false, None),
    })
}

/// Π Q_{pm}(x^{μ_i}) / (Q_p(x) Q_{pm}(x)) for μ with a part not divisible by p.
pub fn lemma33_value(p: u32, m: i64, mu: &Partition) -> Result<Option<LaurentQA>> {
    if mu.all_parts_divisible(p) {
        return Err(Error::PreconditionViolated(format!(
            "every part of {mu} is divisible by {p}"
        )));
    }
    let pm = p as i64 * m;
    let num = qratio_product(pm, mu.parts().iter().map(|&k| k as i64));
    Ok(divide_by_qpm_qp(&num, p, pm).map(|q| LaurentQA::from_qpoly(&q.to_qpoly())))
}

/// Membership of the quotient in ℚ[z²]. `|μ|` must be a multiple of p with |μ|/p coprime to m.
pub fn lemma33_check(p: u32, m: i64, mu: &Partition) -> Result<bool> {
    if !mu.weight().is_multiple_of(p) {
        return Err(Error::PreconditionViolated(format!(
            "|{mu}| is not a multiple of {p}"
        )));
    }
    TorusKnot::new(mu.weight() / p, m)?;
    Ok(match lemma33_value(p, m, mu)? {
        Some(f) => to_z2(&f).is_ok(),
        None => false,
    })
}

/// F_{p,d,m} rebuilt from the p∤μ terms ([`lemma33_value`]) and the μ = pν
/// terms ([`lemma32_value`]):
/// a^{pm}( Σ_{p∤μ} {μ}_a/z_μ · L33(μ) + Σ_{ν⊢d} {pν}_a/z_ν · L32(ν) ).
pub fn split_f(p: u32, d: u32, m: i64) -> Result<LaurentQA> {
    TorusKnot::new(d, m)?;
    if m == 0 {
        return Ok(LaurentQA::zero());
    }
    let inexact = |what: String| Error::NonExactDivision {
        a_exp: 0,
        remainder: what,
    };
    let mut total = LaurentQA::zero();
    for mu in partitions_of(p * d) {
        if mu.all_parts_divisible(p) {
            continue;
        }
        let v =
            lemma33_value(p, m, &mu)?.ok_or_else(|| inexact(format!("lemma value for {mu}")))?;
        let w = BigRational::new(BigInt::one(), BigInt::from(mu.z()));
        total += &(&crate::exactring::abracket_of_partition(&mu, 1) * &v).scale(&w);
    }
    for nu in partitions_of(d) {
        let v =
            lemma32_value(p, m, &nu)?.ok_or_else(|| inexact(format!("lemma value for {nu}")))?;
        let w = BigRational::new(BigInt::one(), BigInt::from(nu.z()));
        total += &(&crate::exactring::abracket_of_partition(&nu, p as i64) * &v).scale(&w);
    }
    Ok(total.shift(crate::exactring::QExp::ZERO, p as i64 * m))
}

/// The split reconstructs F exactly.
pub fn sum_split_identity(p: u32, d: u32, m: i64) -> Result<bool> {
    Ok(split_f(p, d, m)? == f_pdm(p, d, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{abracket, qnum};

    fn t(d: u32, m: i64) -> TorusKnot {
        TorusKnot::new(d, m).unwrap()
    }

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn g_one_is_zero() {
        for (d, m) in [(1, 1), (2, 3), (3, 2)] {
            assert!(g_p(&t(d, m), 1).unwrap().is_zero());
            assert!(f_pdm(1, d, m).unwrap().is_zero());
        }
    }

    #[test]
    fn unknot_g2_has_both_factors() {
        let g = g_p(&t(1, 1), 2).unwrap();
        let h = divide_out_abracket(&g).unwrap();
        assert!(congruence_verdict(&h, 2).pass());
        // Ž_2(T_1^1) = a²·(a²(q²+1+q^{-2}) − (q²+2+q^{-2}) + a^{-2}); g_2 adds Ψ_2(a(a − a^{-1}))
        let z2 = &LaurentQA::a(2)
            * &(LaurentQA::from_qpoly(&QPoly::from_int_coeffs(-2, &[1, 0, 1, 0, 1]))
                .shift(crate::exactring::QExp::ZERO, 2)
                - LaurentQA::from_qpoly(&QPoly::from_int_coeffs(-2, &[1, 0, 2, 0, 1]))
                + LaurentQA::a(-2));
        assert_eq!(reformulated(&t(1, 1), 2).unwrap(), z2);
        assert_eq!(g, &z2 + &(&LaurentQA::a(2) * &abracket(2)));
    }

    #[test]
    fn identity_and_verdicts_small_grid() {
        for (d, m) in [
            (1, 1),
            (1, 2),
            (2, 1),
            (2, 3),
            (3, 1),
            (3, 2),
            (1, -2),
            (2, -3),
        ] {
            for p in [2, 3] {
                let r = verify_hecke(&t(d, m), p).unwrap();
                assert!(r.identity_gp_eq_p2f.passed(), "identity {d},{m},{p}");
                assert!(r.passed(), "verdict {d},{m},{p}: {r:?}");
                assert_eq!(r.strong_factor, Some(Check::Pass));
                assert!(r.quotient.as_ref().unwrap().is_integral());
            }
        }
    }

    #[test]
    fn f_matches_quotient() {
        let g = g_p(&t(1, 1), 2).unwrap();
        let f = f_pdm(2, 1, 1).unwrap();
        assert_eq!(&qnum(2).pow(2) * &f, g);
    }

    #[test]
    fn framing_zero_unknot_is_trivial() {
        let r = verify_hecke(&TorusKnot::unknot(0), 3).unwrap();
        assert!(r.passed());
        assert!(g_p(&TorusKnot::unknot(0), 3).unwrap().is_zero());
    }

    #[test]
    fn report_json_field_names() {
        let r = verify_hecke(&t(1, 1), 2).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec![
            "d",
            "m",
            "framing",
            "p",
            "p_prime",
            "a_factor",
            "z2_member",
            "p2_divisible",
            "quotient",
            "remainder_witness",
            "identity_gp_eq_p2F",
            "millis",
        ];
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert_eq!(v["a_factor"], "pass");
        assert!(v["remainder_witness"].is_null());
        let back: CongruenceReport = serde_json::from_value(v).unwrap();
        assert_eq!(back.p, 2);
    }

    #[test]
    fn double_root_oracle_on_pass() {
        let g = g_p(&t(2, 3), 3).unwrap();
        assert!(double_root_check(&g, 3, 7, 3).within(1e-8));
        // q^2 + 1 + q^{-2} is not divisible by [2]^2
        let bad = LaurentQA::from_qpoly(&QPoly::from_int_coeffs(-2, &[1, 0, 1, 0, 1]));
        assert!(!double_root_check(&bad, 2, 7, 1).within(1e-8));
    }

    #[test]
    fn lemma_examples() {
        assert!(lemma32_check(2, 3, &part(&[1]), 1).unwrap().0);
        assert!(lemma32_check(2, 1, &part(&[1]), 1).unwrap().0);
        assert!(lemma32_check(2, 2, &part(&[2, 1]), 3).unwrap().0);
        assert!(lemma33_check(2, 3, &part(&[1, 1])).unwrap());
        assert!(lemma33_check(2, 3, &part(&[2, 1, 1])).unwrap());
        assert!(matches!(
            lemma33_check(2, 3, &part(&[2, 2])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn split_examples() {
        for (p, d, m) in [(1, 1, 1), (2, 1, 1), (2, 2, 3), (3, 2, 1), (3, 1, 2)] {
            assert!(sum_split_identity(p, d, m).unwrap(), "{p},{d},{m}");
        }
    }
}
