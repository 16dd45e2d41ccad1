//! a → 1 limits of the congruence functions and colored Alexander checks.
//!
//! For a framed knot with framing τ,
//!
//! lim_{a→1} g_p/(a − a^{−1}) = [p]² · A(q^p) · α_p^τ(z),
//!
//! where [p]² α_p^τ = Σ_{m+n+1=p} q^{(m−n)pτ} − p(−1)^{(p−1)τ}.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{HookShape, Partition};
use crate::error::{Error, Result};
use crate::exactring::{
    divide_out_abracket, divide_out_abracket_n, qnum_poly, rat, LaurentQA, QPoly, RingFraction,
};
use crate::hecke::{g_p, hecke_sign};
use crate::torus::{alexander_laurent, colored_alexander, reformulated, TorusKnot};
use crate::zbasis::{congruence_verdict, to_z2, ZAPoly};

/// Where a limit value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitSource {
    Alexander,
    HeckeDifference,
    ColoredAlexander,
    Other,
}

/// lim_{a→1} f/(a − a^{−1}), a polynomial in q alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitValue {
    pub value: LaurentQA,
    pub source: LimitSource,
}

impl LimitValue {
    /// f(q) = f(q^{−1}) = f(−q).
    pub fn is_alexander_symmetric(&self) -> bool {
        self.value.invert_q() == self.value && self.value.negate_q().is_ok_and(|v| v == self.value)
    }
}

impl fmt::Display for LimitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn limit_ratio(f: &LaurentQA, source: LimitSource) -> Result<LimitValue> {
    Ok(LimitValue {
        value: divide_out_abracket(f)?.substitute_a_one(),
        source,
    })
}

/// Σ_{m+n+1=p} q^{(m−n)pτ} − p(−1)^{(p−1)τ}.
fn hook_sum(p: u32, tau: i64) -> QPoly {
    let p = p as i64;
    let sign = if (p - 1) * tau % 2 == 0 { 1 } else { -1 };
    let mut terms: Vec<(i64, BigRational)> = (0..p)
        .map(|m| ((m - (p - 1 - m)) * p * tau, rat(1)))
        .collect();
    terms.push((0, rat(-p * sign)));
    QPoly::from_terms(terms)
}

/// α_p^τ as a q-polynomial, by exact division by [p]².
pub fn alpha_laurent(p: u32, tau: i64) -> Result<LaurentQA> {
    if p == 0 {
        return Err(Error::PreconditionViolated("p must be positive".into()));
    }
    RingFraction::new(
        LaurentQA::from_qpoly(&hook_sum(p, tau)),
        qnum_poly(p as i64).pow(2),
    )?
    .resolve()
}

/// α_p^τ in the z²-basis.
pub fn alpha(p: u32, tau: i64) -> Result<ZAPoly> {
    to_z2(&alpha_laurent(p, tau)?)
}

/// Both sides of the limit identity for (T, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitIdentity {
    pub lhs: LimitValue,
    pub rhs: LaurentQA,
}

impl LimitIdentity {
    pub fn holds(&self) -> bool {
        self.lhs.value == self.rhs
    }
}

/// lim g_p/(a − a^{−1}) against [p]² · A(T; q^p) · α_p^{dm}.
pub fn limit_identity(knot: &TorusKnot, p: u32) -> Result<LimitIdentity> {
    let lhs = limit_ratio(&g_p(knot, p)?, LimitSource::HeckeDifference)?;
    let qnum_sq = LaurentQA::from_qpoly(&qnum_poly(p as i64).pow(2));
    let a_p = alexander_laurent(knot)?.adams(p as i64);
    let rhs = &(&qnum_sq * &a_p) * &alpha_laurent(p, knot.framing())?;
    Ok(LimitIdentity { lhs, rhs })
}

pub fn limit_identity_check(knot: &TorusKnot, p: u32) -> Result<bool> {
    Ok(limit_identity(knot, p)?.holds())
}

/// lim g_p/(a − a^{−1}) ∈ [p]² ℤ[z²].
pub fn theorem13_verdict(knot: &TorusKnot, p: u32) -> Result<bool> {
    let lhs = limit_ratio(&g_p(knot, p)?, LimitSource::HeckeDifference)?;
    Ok(congruence_verdict(&lhs.value, p).pass())
}

/// lim_{a→1} f/(a^p − a^{−p}) = (1/p) lim_{a→1} f/(a − a^{−1}).
fn normalized_limit(f: &LaurentQA, p: u32) -> Result<LaurentQA> {
    Ok(limit_ratio(f, LimitSource::Other)?
        .value
        .scale(&BigRational::new(1.into(), (p as i64).into())))
}

/// The same limit by the second route,
/// p · ( lim Ž_p/(a^p − a^{−p}) − s · lim Ψ_p(Ž)/(a^p − a^{−p}) ),
/// where the second quotient is taken exactly: Ψ_p(Ž) = (a^p − a^{−p}) Ψ_p(Ž/(a − a^{−1})).
pub fn limit_by_normalized_parts(knot: &TorusKnot, p: u32) -> Result<LaurentQA> {
    let zp = normalized_limit(&reformulated(knot, p)?, p)?;
    let z1 = divide_out_abracket_n(&reformulated(knot, 1)?.adams(p as i64), p as i64)?
        .substitute_a_one();
    Ok((&zp - &z1.scale_int(hecke_sign(p, knot))).scale_int(p as i64))
}

/// A_λ(T) for a hook λ against A(T; q^{|λ|}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookCheck {
    pub hook: HookShape,
    pub colored: LimitValue,
    pub expected: LaurentQA,
}

impl HookCheck {
    pub fn holds(&self) -> bool {
        self.colored.value == self.expected
    }

    pub fn partition(&self) -> Partition {
        self.hook.to_partition()
    }
}

pub fn verify_thm41_hooks(knot: &TorusKnot, hook: HookShape) -> Result<HookCheck> {
    let lambda = hook.to_partition();
    let colored = LimitValue {
        value: colored_alexander(knot, &lambda)?,
        source: LimitSource::ColoredAlexander,
    };
    let expected = alexander_laurent(knot)?.adams(lambda.weight() as i64);
    Ok(HookCheck {
        hook,
        colored,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{abracket, qbracket, qnum};
    use crate::zbasis::z_squared;

    fn t(d: u32, m: i64) -> TorusKnot {
        TorusKnot::new(d, m).unwrap()
    }

    #[test]
    fn limit_ratio_examples() {
        let f = &abracket(1) * &LaurentQA::q(1);
        assert_eq!(
            limit_ratio(&f, LimitSource::Other).unwrap().value,
            LaurentQA::q(1)
        );
        assert_eq!(
            limit_ratio(&abracket(5), LimitSource::Other).unwrap().value,
            LaurentQA::from_int(5)
        );
        let tref =
            limit_ratio(&reformulated(&t(2, 3), 1).unwrap(), LimitSource::Alexander).unwrap();
        assert_eq!(tref.value, &z_squared() + &LaurentQA::one());
        assert!(tref.is_alexander_symmetric());
        assert!(limit_ratio(&LaurentQA::one(), LimitSource::Other).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_laurent(2, 1).unwrap(), LaurentQA::one());
        assert_eq!(alpha_laurent(3, 1).unwrap(), z_squared());
        for p in [1, 2, 3, 5] {
            assert!(alpha_laurent(p, 0).unwrap().is_zero());
        }
        assert!(alpha(5, -3).unwrap().is_integral());
    }

    #[test]
    fn limit_identity_examples() {
        for (d, m, p) in [
            (2, 3, 2),
            (1, 1, 3),
            (2, 3, 1),
            (3, 2, 3),
            (1, 2, 5),
            (2, 5, 3),
        ] {
            let li = limit_identity(&t(d, m), p).unwrap();
            assert!(li.holds(), "T({d},{m}) p={p}: {} vs {}", li.lhs, li.rhs);
            assert!(theorem13_verdict(&t(d, m), p).unwrap());
            assert_eq!(
                limit_by_normalized_parts(&t(d, m), p).unwrap(),
                li.lhs.value
            );
        }
        let unknot = limit_identity(&t(1, 1), 3).unwrap();
        assert_eq!(unknot.lhs.value, &qnum(3).pow(2) * &z_squared());
    }

    #[test]
    fn trefoil_limit_rhs() {
        // A(T_2^3; q²) = q⁴ − 1 + q^{−4}, and α_2^6 = {6}²/[2]²
        let li = limit_identity(&t(2, 3), 2).unwrap();
        let a2 = &(&LaurentQA::q(4) - &LaurentQA::one()) + &LaurentQA::q(-4);
        let alpha26 =
            crate::exactring::divide_q_only(&qbracket(6).pow(2), &qnum(2).pow(2)).unwrap();
        assert_eq!(li.rhs, &(&qnum(2).pow(2) * &a2) * &alpha26);
    }

    #[test]
    fn hook_examples() {
        let tref = verify_thm41_hooks(&t(2, 3), HookShape::new(1, 1)).unwrap();
        assert!(tref.holds(), "{}", tref.colored);
        assert_eq!(
            tref.expected,
            &(&LaurentQA::q(6) - &LaurentQA::one()) + &LaurentQA::q(-6)
        );
        assert!(verify_thm41_hooks(&t(1, 1), HookShape::new(1, 0))
            .unwrap()
            .holds());
        let fund = verify_thm41_hooks(&t(2, 3), HookShape::new(0, 0)).unwrap();
        assert_eq!(fund.colored.value, &z_squared() + &LaurentQA::one());
    }
}
