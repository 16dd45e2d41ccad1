//! Floating-point evaluation, used only as an oracle for exact verdicts.
//!
//! Fractional q-powers use the principal branch `q^{n/d} = exp((n/d) Log q)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::laurent::LaurentQA;
use super::qexp::QExp;
use super::qpoly::QPoly;

fn qpow(q0: Complex64, e: QExp) -> Complex64 {
    match e.to_integer() {
        Some(n) => q0.powi(n as i32),
        None => (q0.ln() * e.to_f64()).exp(),
    }
}

fn to_f64(c: &BigRational) -> f64 {
    c.to_f64().expect("coefficient does not fit in f64")
}

/// f(q0, a0).
pub fn eval_numeric(f: &LaurentQA, q0: Complex64, a0: Complex64) -> Complex64 {
    f.terms()
        .map(|(a, q, c)| qpow(q0, q) * a0.powi(a as i32) * to_f64(c))
        .sum()
}

/// ∂f/∂q at (q0, a0).
pub fn eval_dq(f: &LaurentQA, q0: Complex64, a0: Complex64) -> Complex64 {
    f.terms()
        .filter(|(_, q, _)| !q.is_zero())
        .map(|(a, q, c)| qpow(q0, q + QExp::int(-1)) * a0.powi(a as i32) * (to_f64(c) * q.to_f64()))
        .sum()
}

/// Value and q-derivative at q = e^{iπ s/n}, with a = a0.
///
/// Each a-slice is reduced exactly modulo the cyclotomic polynomial Φ_{2n},
/// the minimal polynomial of every primitive 2n-th root of unity, so large
/// coefficients cancel before rounding. `s` must be coprime to 2n.
pub fn eval_at_root_of_unity(
    f: &LaurentQA,
    s: i64,
    n: i64,
    a0: Complex64,
) -> (Complex64, Complex64) {
    assert!(n > 0);
    assert!(
        f.has_integer_q_exponents(),
        "root-of-unity evaluation needs integer q-exponents"
    );
    let modulus = 2 * n;
    let mut value: BTreeMap<i64, BTreeMap<i64, BigRational>> = BTreeMap::new();
    let mut deriv: BTreeMap<i64, BTreeMap<i64, BigRational>> = BTreeMap::new();
    for (a, q, c) in f.terms() {
        let e = q.numer();
        *value
            .entry(a)
            .or_default()
            .entry(e.rem_euclid(modulus))
            .or_insert_with(BigRational::zero) += c;
        if e != 0 {
            let scaled = c * BigRational::from_integer(e.into());
            *deriv
                .entry(a)
                .or_default()
                .entry((e - 1).rem_euclid(modulus))
                .or_insert_with(BigRational::zero) += scaled;
        }
    }
    let phi = cyclotomic(modulus as u64);
    let x = Complex64::from_polar(1.0, PI * s as f64 / n as f64);
    let fold = |m: BTreeMap<i64, BTreeMap<i64, BigRational>>| -> Complex64 {
        m.into_iter()
            .map(|(a, slice)| {
                let (_, r) = QPoly::from_terms(slice).div_rem(&phi);
                let v: Complex64 = r.terms().map(|(k, c)| x.powi(k as i32) * to_f64(c)).sum();
                v * a0.powi(a as i32)
            })
            .sum()
    };
    (fold(value), fold(deriv))
}

/// Φ_N(x), by dividing x^N − 1 by Φ_d for the proper divisors d of N.
pub fn cyclotomic(n: u64) -> QPoly {
    let one = BigRational::from_integer(1.into());
    let mut poly = QPoly::from_terms([(n as i64, one.clone()), (0, -one)]);
    for d in (1..n).filter(|&d| n.is_multiple_of(d)) {
        poly = poly
            .div_exact(&cyclotomic(d))
            .expect("cyclotomic factors divide x^N - 1");
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{qbracket, qnum};

    #[test]
    fn bracket_vanishes_at_i() {
        let v = eval_numeric(&qbracket(2), Complex64::i(), Complex64::new(1.0, 0.0));
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn qnum_at_one() {
        let v = eval_numeric(&qnum(3), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn double_root_of_qnum_squared() {
        let f = qnum(2).pow(2);
        let i = Complex64::from_polar(1.0, PI / 2.0);
        let one = Complex64::new(1.0, 0.0);
        assert!(eval_numeric(&f, i, one).norm() < 1e-12);
        assert!(eval_dq(&f, i, one).norm() < 1e-12);
        let (v, d) = eval_at_root_of_unity(&f, 1, 2, one);
        assert!(v.norm() < 1e-12 && d.norm() < 1e-12);
    }

    #[test]
    fn folded_matches_direct() {
        let f = &qnum(5) * &LaurentQA::a(3) + LaurentQA::q(7).scale_int(-4);
        let a0 = Complex64::from_polar(1.0, 0.7);
        let q0 = Complex64::from_polar(1.0, PI * 3.0 / 5.0);
        let (v, d) = eval_at_root_of_unity(&f, 3, 5, a0);
        assert!((v - eval_numeric(&f, q0, a0)).norm() < 1e-9);
        assert!((d - eval_dq(&f, q0, a0)).norm() < 1e-9);
    }

    #[test]
    fn single_root_is_detected() {
        let f = &qnum(3) * &LaurentQA::a(2);
        let (v, d) = eval_at_root_of_unity(&f, 1, 3, Complex64::from_polar(1.0, 0.3));
        assert!(v.norm() < 1e-12);
        assert!(d.norm() > 0.1);
        let (v, _) = eval_at_root_of_unity(&qnum(2), 1, 3, Complex64::new(1.0, 0.0));
        assert!(v.norm() > 0.1);
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), QPoly::from_int_coeffs(0, &[-1, 1]));
        assert_eq!(cyclotomic(4), QPoly::from_int_coeffs(0, &[1, 0, 1]));
        assert_eq!(cyclotomic(6), QPoly::from_int_coeffs(0, &[1, -1, 1]));
        assert_eq!(
            cyclotomic(10),
            QPoly::from_int_coeffs(0, &[1, -1, 1, -1, 1])
        );
    }

    #[test]
    fn principal_branch_for_fractional_powers() {
        let f = LaurentQA::q_frac(1, 2);
        let v = eval_numeric(&f, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((v - Complex64::i()).norm() < 1e-12);
    }
}
