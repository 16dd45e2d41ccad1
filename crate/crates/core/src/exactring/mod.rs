//! Exact Laurent-polynomial arithmetic in q and a over the rationals.

mod fraction;
mod laurent;
mod numeric;
mod qexp;
mod qpoly;
mod text;

pub use fraction::RingFraction;
pub use laurent::{rat, LaurentQA};
pub use numeric::{eval_at_root_of_unity, eval_dq, eval_numeric};
pub use qexp::QExp;
pub use qpoly::{QPoly, ZPoly};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::Partition;
use crate::error::{Error, Result};

/// {n} = q^n − q^{−n}.
pub fn qbracket(n: i64) -> LaurentQA {
    &LaurentQA::q(n) - &LaurentQA::q(-n)
}

/// {n}_a = a^n − a^{−n}.
pub fn abracket(n: i64) -> LaurentQA {
    &LaurentQA::a(n) - &LaurentQA::a(-n)
}

pub fn qbracket_poly(n: i64) -> QPoly {
    QPoly::from_terms([(n, rat(1)), (-n, rat(-1))])
}

/// [n] = {n}/{1} = q^{n−1} + q^{n−3} + ... + q^{−(n−1)}; [−n] = −[n].
pub fn qnum(n: i64) -> LaurentQA {
    LaurentQA::from_qpoly(&qnum_poly(n))
}

pub fn qnum_poly(n: i64) -> QPoly {
    ZPoly::qratio(n, 1).to_qpoly()
}

/// {cμ} = Π {c·μ_i}.
pub fn bracket_of_partition(mu: &Partition, c: i64) -> LaurentQA {
    assert!(c != 0, "bracket_of_partition needs c != 0");
    LaurentQA::from_qpoly(&bracket_of_partition_poly(mu, c))
}

pub fn bracket_of_partition_poly(mu: &Partition, c: i64) -> QPoly {
    mu.parts()
        .iter()
        .fold(QPoly::one(), |acc, &m| &acc * &qbracket_poly(c * m as i64))
}

/// {cμ}_a = Π {c·μ_i}_a.
pub fn abracket_of_partition(mu: &Partition, c: i64) -> LaurentQA {
    assert!(c != 0, "abracket_of_partition needs c != 0");
    mu.parts()
        .iter()
        .fold(LaurentQA::one(), |acc, &m| &acc * &abracket(c * m as i64))
}

/// Ψ_d(f)(q, a) = f(q^d, a^d).
pub fn adams(f: &LaurentQA, d: i64) -> LaurentQA {
    f.adams(d)
}

/// f at a = 1.
pub fn substitute_a(f: &LaurentQA) -> LaurentQA {
    f.substitute_a_one()
}

/// Exact quotient f / (a − a^{−1}).
pub fn divide_out_abracket(f: &LaurentQA) -> Result<LaurentQA> {
    divide_out_abracket_n(f, 1)
}

/// Exact quotient f / (a^n − a^{−n}), n ≥ 1.
pub fn divide_out_abracket_n(f: &LaurentQA, n: i64) -> Result<LaurentQA> {
    assert!(n >= 1, "divide_out_abracket_n needs n >= 1");
    let mut quotient = LaurentQA::zero();
    for (q_exp, column) in f.q_slices() {
        // f_k = h_{k-n} − h_{k+n}, solved from the top a-degree down.
        let (&lo, &hi) = (
            column.keys().next().unwrap(),
            column.keys().next_back().unwrap(),
        );
        let mut h: BTreeMap<i64, BigRational> = BTreeMap::new();
        let mut k = hi;
        while k >= lo + 2 * n {
            let fk = column.get(&k).cloned().unwrap_or_else(BigRational::zero);
            let hk = h.get(&(k + n)).cloned().unwrap_or_else(BigRational::zero);
            let v = fk + hk;
            if !v.is_zero() {
                h.insert(k - n, v);
            }
            k -= 1;
        }
        for (a_exp, c) in h {
            quotient.add_term(a_exp, q_exp, c);
        }
    }
    let remainder = f - &(&abracket(n) * &quotient);
    if remainder.is_zero() {
        Ok(quotient)
    } else {
        let divisor = if n == 1 {
            "a - a^-1".to_string()
        } else {
            format!("a^{n} - a^-{n}")
        };
        Err(Error::NotDivisible {
            divisor,
            remainder: remainder.to_string(),
        })
    }
}

/// Exact quotient num / den of q-only polynomials given as [`LaurentQA`].
pub fn divide_q_only(num: &LaurentQA, den: &LaurentQA) -> Result<LaurentQA> {
    RingFraction::new(num.clone(), den.to_qpoly()?)?.resolve()
}

pub(crate) fn inv_rat(n: u128) -> BigRational {
    BigRational::new(One::one(), num_bigint::BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(qbracket(1), &LaurentQA::q(1) - &LaurentQA::q(-1));
        assert!(qbracket(0).is_zero());
        assert_eq!(qbracket(-3), -qbracket(3));
        assert_eq!(abracket(2), &LaurentQA::a(2) - &LaurentQA::a(-2));
    }

    #[test]
    fn qnum_examples() {
        assert_eq!(qnum(1), LaurentQA::one());
        assert_eq!(qnum(2), &LaurentQA::q(1) + &LaurentQA::q(-1));
        for n in 1..8 {
            assert_eq!(&qnum(n) * &qbracket(1), qbracket(n));
            // value at q = 1
            assert_eq!(
                qnum(n).terms().map(|t| t.2.clone()).sum::<BigRational>(),
                rat(n)
            );
        }
    }

    #[test]
    fn partition_brackets() {
        assert_eq!(bracket_of_partition(&p(&[1, 1]), 3), qbracket(3).pow(2));
        assert_eq!(bracket_of_partition(&p(&[2]), 1), qbracket(2));
        assert_eq!(
            bracket_of_partition(&p(&[2, 1]), 2),
            &qbracket(4) * &qbracket(2)
        );
        assert_eq!(
            abracket_of_partition(&p(&[2, 1]), 1),
            &abracket(2) * &abracket(1)
        );
    }

    #[test]
    fn adams_examples() {
        for d in 1..5 {
            assert_eq!(adams(&qbracket(1), d), qbracket(d));
        }
        let f = &LaurentQA::q(1) + &LaurentQA::a(1);
        assert_eq!(adams(&f, 1), f);
        assert_eq!(adams(&f, 2), &LaurentQA::q(2) + &LaurentQA::a(2));
    }

    #[test]
    fn resolve_examples() {
        let x = &LaurentQA::q(3) * &LaurentQA::a(-1) + LaurentQA::from_int(5);
        let fr = RingFraction::new(&qbracket(2) * &x, qbracket_poly(2)).unwrap();
        assert_eq!(fr.resolve().unwrap(), x);

        let num = &(&qbracket(6) * &qbracket(1));
        let den = &qbracket_poly(2) * &qbracket_poly(3);
        let trefoil = RingFraction::new(num.clone(), den)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(
            trefoil,
            LaurentQA::q(2) - LaurentQA::one() + LaurentQA::q(-2)
        );

        let bad =
            RingFraction::new(&LaurentQA::q(1) + &LaurentQA::one(), qbracket_poly(1)).unwrap();
        assert!(matches!(bad.resolve(), Err(Error::NonExactDivision { .. })));
    }

    #[test]
    fn divide_out_abracket_examples() {
        assert_eq!(divide_out_abracket(&abracket(1)).unwrap(), LaurentQA::one());
        for p in 1..7 {
            // [p] with q renamed to a
            let in_a = LaurentQA::from_terms(
                qnum(p)
                    .terms()
                    .map(|(_, q, c)| (q.numer(), QExp::ZERO, c.clone())),
            );
            assert_eq!(divide_out_abracket(&abracket(p)).unwrap(), in_a);
        }
        assert!(matches!(
            divide_out_abracket(&LaurentQA::one()),
            Err(Error::NotDivisible { .. })
        ));
        let x = &LaurentQA::q(2) * &LaurentQA::a(1) + LaurentQA::a(-4);
        assert_eq!(divide_out_abracket_n(&(&abracket(3) * &x), 3).unwrap(), x);
        assert!(divide_out_abracket_n(&abracket(2), 3).is_err());
    }

    #[test]
    fn substitute_a_examples() {
        let f = &LaurentQA::a(3) * &abracket(1);
        assert!(substitute_a(&f).is_zero());
        assert_eq!(
            substitute_a(&divide_out_abracket(&f).unwrap()),
            LaurentQA::one()
        );
        assert_eq!(
            substitute_a(&(&LaurentQA::q(1) * &LaurentQA::a(2))),
            LaurentQA::q(1)
        );
    }
}
