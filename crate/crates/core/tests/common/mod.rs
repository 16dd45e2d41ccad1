//! Independent oracles shared by the integration targets.

use hecke_core::{LaurentQA, Partition, RingFraction};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// χ_λ(μ) = [x^{λ+δ}] Δ(x)·p_μ(x) in n variables, by enumerating where each
/// power sum's monomial lands and matching the remainder against σ(δ).
pub fn frobenius_character(lambda: &Partition, mu: &Partition) -> i64 {
    let n = lambda.weight() as usize;
    let mut target: Vec<i64> = (0..n)
        .map(|i| lambda.parts().get(i).copied().unwrap_or(0) as i64 + (n - 1 - i) as i64)
        .collect();
    let l = mu.len();
    let mut total = 0;
    let mut choice = vec![0usize; l];
    loop {
        for (j, &i) in choice.iter().enumerate() {
            target[i] -= mu.parts()[j] as i64;
        }
        total += permutation_sign_of_staircase(&target);
        for (j, &i) in choice.iter().enumerate() {
            target[i] += mu.parts()[j] as i64;
        }
        let mut k = 0;
        while k < l {
            choice[k] += 1;
            if choice[k] < n {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == l {
            return total;
        }
    }
}

/// sgn σ if e = σ(n−1, ..., 0), else 0.
fn permutation_sign_of_staircase(e: &[i64]) -> i64 {
    let n = e.len() as i64;
    let mut seen = vec![false; e.len()];
    for &x in e {
        if x < 0 || x >= n || seen[x as usize] {
            return 0;
        }
        seen[x as usize] = true;
    }
    let mut inversions = 0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i] < e[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn eval_at(f: &LaurentQA, q: &BigRational) -> BigRational {
    f.terms()
        .map(|(a, e, c)| {
            assert_eq!(a, 0);
            let e = e.to_integer().expect("integer exponent");
            let base = if e >= 0 { q.clone() } else { q.recip() };
            c * num_traits::pow(base, e.unsigned_abs() as usize)
        })
        .sum()
}

pub fn eval_fraction(f: &RingFraction, q: &BigRational) -> BigRational {
    eval_at(f.num(), q) / eval_at(&LaurentQA::from_qpoly(f.den()), q)
}

pub fn invert(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("singular");
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let (a, b) = (&m[col][j] * &f, &inv[col][j] * &f);
                    m[r][j] -= a;
                    inv[r][j] -= b;
                }
            }
        }
    }
    inv
}
