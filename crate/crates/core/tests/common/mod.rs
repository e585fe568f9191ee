//! Reference implementations written straight from the definitions, over
//! plain `BigRational`, sharing no code with the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use qstancu::Rational;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_lib(v: &Q) -> Rational {
    Rational::from_bigints(v.numer().clone(), v.denom().clone()).unwrap()
}

pub fn from_lib(v: &Rational) -> Q {
    v.inner().clone()
}

pub fn pow(b: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * b)
}

/// `1 + q + ... + q^{n-1}`
pub fn qint(n: usize, qq: &Q) -> Q {
    (0..n).map(|i| pow(qq, i)).fold(Q::zero(), |a, b| a + b)
}

/// Gaussian binomial from the q-Pascal rule `[n k] = [n-1 k-1] + q^k [n-1 k]`.
pub fn qbinom(n: usize, k: usize, qq: &Q) -> Q {
    let mut row = vec![Q::one()];
    for m in 1..=n {
        let mut next = vec![Q::one(); m + 1];
        for j in 1..m {
            next[j] = row[j - 1].clone() + pow(qq, j) * &row[j];
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_else(Q::zero)
}

/// `prod_{j<m} (1 - a q^j)`
pub fn poch(a: &Q, qq: &Q, m: usize) -> Q {
    (0..m).fold(Q::one(), |acc, j| acc * (Q::one() - a * pow(qq, j)))
}

/// Basis from its defining products.
pub fn basis(n: usize, qq: &Q, alpha: &Q, x: &Q) -> Vec<Q> {
    let denom = (0..n).fold(Q::one(), |acc, i| acc * (Q::one() + alpha * qint(i, qq)));
    (0..=n)
        .map(|k| {
            let rising = (0..k).fold(Q::one(), |acc, i| acc * (x + alpha * qint(i, qq)));
            let falling = (0..n - k).fold(Q::one(), |acc, s| {
                acc * (Q::one() - pow(qq, s) * x + alpha * qint(s, qq))
            });
            qbinom(n, k, qq) * rising * falling / &denom
        })
        .collect()
}

pub fn apply(n: usize, qq: &Q, alpha: &Q, x: &Q, f: impl Fn(&Q) -> Q) -> Q {
    let qn = qint(n, qq);
    basis(n, qq, alpha, x)
        .into_iter()
        .enumerate()
        .map(|(k, p)| f(&(qint(k, qq) / &qn)) * p)
        .fold(Q::zero(), |a, b| a + b)
}

/// `[n k] x^k (x; q)_{n-k}`
pub fn qbernstein_basis(n: usize, qq: &Q, x: &Q) -> Vec<Q> {
    (0..=n)
        .map(|k| qbinom(n, k, qq) * pow(x, k) * poch(x, qq, n - k))
        .collect()
}

pub fn qbernstein_apply(n: usize, qq: &Q, x: &Q, f: impl Fn(&Q) -> Q) -> Q {
    let qn = qint(n, qq);
    qbernstein_basis(n, qq, x)
        .into_iter()
        .enumerate()
        .map(|(k, p)| f(&(qint(k, qq) / &qn)) * p)
        .fold(Q::zero(), |a, b| a + b)
}

pub fn monomial(m: usize) -> impl Fn(&Q) -> Q {
    move |t| pow(t, m)
}

pub fn abs(v: Q) -> Q {
    v.abs()
}

/// Ordinary binomial coefficient by Pascal's triangle.
pub fn choose(m: usize, s: usize) -> i64 {
    let mut row = vec![1i64];
    for _ in 0..m {
        let mut next = vec![1i64; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    row[s]
}

/// Limit moments `sum_s C(m,s) (-1)^s (r;q)_s / (g;q)_s`.
pub fn limit_moment(m: usize, qq: &Q, alpha: &Q, x: &Q) -> Q {
    let gamma = alpha / (Q::one() - qq);
    let r = (x + &gamma) / (Q::one() + &gamma);
    let g = &gamma / (Q::one() + &gamma);
    (0..=m)
        .map(|s| {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            q(sign * choose(m, s), 1) * poch(&r, qq, s) / poch(&g, qq, s)
        })
        .fold(Q::zero(), |a, b| a + b)
}

pub const Q_SWEEP: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];
pub const ALPHA_SWEEP: [(i64, i64); 4] = [(0, 1), (1, 4), (1, 1), (3, 1)];

/// `(q, alpha)` pairs of the rational sweep.
pub fn param_sweep() -> Vec<(Q, Q)> {
    let mut out = Vec::new();
    for &(a, b) in &Q_SWEEP {
        for &(c, d) in &ALPHA_SWEEP {
            out.push((q(a, b), q(c, d)));
        }
    }
    out
}

/// `0, 1/8, ..., 1`
pub fn x_sweep() -> Vec<Q> {
    (0..=8).map(|j| q(j, 8)).collect()
}
