//! q-calculus primitives: q-integers, q-factorials, q-Pochhammer symbols,
//! q-binomial coefficients and the two classical identities built on them.
//!
//! Finite quantities are generic over [`Scalar`] and exact in rational mode.
//! The infinite Pochhammer product and the q-binomial series are float-only
//! and return a [`TruncationCertificate`] bounding everything that was
//! discarded, floating-point rounding included.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Scalar, ScalarKind, Tolerance};

/// Unit roundoff for `f64`.
pub(crate) const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Validated `(q, alpha)` pair. `gamma = alpha / (1 - q)` is derived on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct QParams<S> {
    q: S,
    alpha: S,
}

impl<S: Scalar> QParams<S> {
    pub fn new(q: S, alpha: S) -> Result<Self> {
        check_q(&q)?;
        if alpha.is_negative() {
            return Err(Error::InvalidAlpha(alpha.to_string()));
        }
        Ok(QParams { q, alpha })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn gamma(&self) -> S {
        self.alpha.clone() / (S::one() - self.q.clone())
    }

    /// Parameters one level down the moment recurrences: `alpha -> q alpha / (1 + alpha)`.
    pub fn shifted(&self) -> Self {
        let alpha = self.q.clone() * self.alpha.clone() / (S::one() + self.alpha.clone());
        QParams {
            q: self.q.clone(),
            alpha,
        }
    }
}

/// Truncation index plus a proven bound on `|truncated - exact|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationCertificate {
    pub n_terms: usize,
    pub tail_bound: f64,
}

impl TruncationCertificate {
    pub fn exact(n_terms: usize) -> Self {
        TruncationCertificate {
            n_terms,
            tail_bound: 0.0,
        }
    }
}

pub fn check_q<S: Scalar>(q: &S) -> Result<()> {
    if *q > S::zero() && *q < S::one() {
        Ok(())
    } else {
        Err(Error::InvalidQ(q.to_string()))
    }
}

pub(crate) fn require_float<S: Scalar>(what: &'static str) -> Result<()> {
    match S::KIND {
        ScalarKind::Float => Ok(()),
        ScalarKind::ExactRational => Err(Error::ExactModeUnsupported(what)),
    }
}

/// `[n]_q = 1 + q + ... + q^{n-1}`, `[0]_q = 0`.
///
/// Rational mode sums directly; float mode uses `(1 - q^n) / (1 - q)`.
pub fn q_integer<S: Scalar>(n: usize, q: &S) -> Result<S> {
    check_q(q)?;
    Ok(q_integer_raw(n, q))
}

pub(crate) fn q_integer_raw<S: Scalar>(n: usize, q: &S) -> S {
    match S::KIND {
        ScalarKind::ExactRational => {
            let mut acc = S::zero();
            for _ in 0..n {
                acc = S::one() + q.clone() * acc;
            }
            acc
        }
        ScalarKind::Float => (S::one() - q.powi(n as u32)) / (S::one() - q.clone()),
    }
}

/// `[0]_q, [1]_q, ..., [n]_q`.
pub(crate) fn q_integers_upto<S: Scalar>(n: usize, q: &S) -> Vec<S> {
    (0..=n).map(|i| q_integer_raw(i, q)).collect()
}

pub fn q_factorial<S: Scalar>(n: usize, q: &S) -> Result<S> {
    check_q(q)?;
    Ok(q_factorials_upto(n, q).pop().unwrap_or_else(S::one))
}

pub(crate) fn q_factorials_upto<S: Scalar>(n: usize, q: &S) -> Vec<S> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(S::one());
    for i in 1..=n {
        let next = out[i - 1].clone() * q_integer_raw(i, q);
        out.push(next);
    }
    out
}

/// `(a; q)_m = prod_{j<m} (1 - a q^j)`.
pub fn q_pochhammer<S: Scalar>(a: &S, q: &S, m: usize) -> Result<S> {
    check_q(q)?;
    Ok(q_pochhammer_raw(a, q, m))
}

pub(crate) fn q_pochhammer_raw<S: Scalar>(a: &S, q: &S, m: usize) -> S {
    let mut acc = S::one();
    let mut t = a.clone();
    for _ in 0..m {
        acc = acc * (S::one() - t.clone());
        t = t * q.clone();
    }
    acc
}

/// Gaussian binomial via q-factorials.
pub fn q_binomial<S: Scalar>(n: usize, k: usize, q: &S) -> Result<S> {
    check_q(q)?;
    if k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    let f = q_factorials_upto(n, q);
    Ok(f[n].clone() / (f[k].clone() * f[n - k].clone()))
}

/// Gaussian binomial via `(q;q)_n / ((q;q)_k (q;q)_{n-k})`.
pub fn q_binomial_pochhammer<S: Scalar>(n: usize, k: usize, q: &S) -> Result<S> {
    check_q(q)?;
    if k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    let p = |m| q_pochhammer_raw(q, q, m);
    Ok(p(n) / (p(k) * p(n - k)))
}

/// Row `[n 0]_q .. [n n]_q`.
pub(crate) fn q_binomial_row<S: Scalar>(n: usize, q: &S) -> Vec<S> {
    let f = q_factorials_upto(n, q);
    (0..=n)
        .map(|k| f[n].clone() / (f[k].clone() * f[n - k].clone()))
        .collect()
}

/// Truncated `(a; q)_inf` for `a` in `[0, 1]`, float mode only.
///
/// `N` is the smallest index with `q^N / (1 - q) <= tail_tol`. Because every
/// factor lies in `[0, 1]`, `(a;q)_N - (a;q)_inf = (a;q)_N (1 - (a q^N; q)_inf)`
/// and `1 - prod(1 - a_i) <= sum a_i` bounds the gap by
/// `(a;q)_N * a q^N / (1 - q)`. The certificate adds a running rounding
/// estimate for the `N` multiplications on top of that.
pub fn q_pochhammer_infinite<S: Scalar>(
    a: &S,
    q: &S,
    tail_tol: f64,
) -> Result<(S, TruncationCertificate)> {
    require_float::<S>("infinite q-Pochhammer product")?;
    check_q(q)?;
    check_tail_tol(tail_tol)?;
    let (a, q) = (a.to_f64(), q.to_f64());
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidDomain(format!(
            "infinite q-Pochhammer argument must lie in [0, 1], got {a}"
        )));
    }
    let (value, cert) = pochhammer_infinite_f64(a, q, tail_tol);
    Ok((S::from_f64(value), cert))
}

pub(crate) fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if tail_tol.is_finite() && tail_tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!(
            "tail tolerance must be positive, got {tail_tol}"
        )))
    }
}

/// Smallest `N` with `q^N / (1 - q) <= tail_tol`.
pub(crate) fn truncation_index(q: f64, tail_tol: f64) -> usize {
    let mut n = 0usize;
    let mut qn = 1.0f64;
    while qn / (1.0 - q) > tail_tol {
        qn *= q;
        n += 1;
    }
    n
}

pub(crate) fn pochhammer_infinite_f64(
    a: f64,
    q: f64,
    tail_tol: f64,
) -> (f64, TruncationCertificate) {
    if a == 0.0 {
        return (1.0, TruncationCertificate::exact(0));
    }
    if a == 1.0 {
        return (0.0, TruncationCertificate::exact(1));
    }
    let n = truncation_index(q, tail_tol);
    let mut value = 1.0f64;
    let mut t = a;
    // First-order relative error of `value`: each step rounds the
    // subtraction and the product, and `t = a q^j` carries j roundings.
    let mut rel_err = 0.0f64;
    for j in 0..n {
        value *= 1.0 - t;
        rel_err += 2.0 * UNIT_ROUNDOFF + j as f64 * UNIT_ROUNDOFF * t / (1.0 - t);
        t *= q;
    }
    let truncation = value * t / (1.0 - q);
    let rounding = 1.01 * rel_err * value;
    (
        value,
        TruncationCertificate {
            n_terms: n,
            tail_bound: truncation + rounding,
        },
    )
}

/// Both sides of `(ab; q)_n = sum_k [n k]_q b^k (a;q)_k (b;q)_{n-k}`.
pub fn product_identity_sides<S: Scalar>(a: &S, b: &S, q: &S, n: usize) -> Result<(S, S)> {
    check_q(q)?;
    let lhs = q_pochhammer_raw(&(a.clone() * b.clone()), q, n);
    let binom = q_binomial_row(n, q);
    let mut rhs = S::zero();
    for (k, c) in binom.into_iter().enumerate() {
        rhs =
            rhs + c * b.powi(k as u32) * q_pochhammer_raw(a, q, k) * q_pochhammer_raw(b, q, n - k);
    }
    Ok((lhs, rhs))
}

/// Checks the finite product identity; exact equality in rational mode.
pub fn verify_product_identity<S: Scalar>(a: &S, b: &S, q: &S, n: usize) -> Result<bool> {
    let (lhs, rhs) = product_identity_sides(a, b, q, n)?;
    Ok(lhs.approx_eq(&rhs, &Tolerance::FINITE))
}

/// Truncated `sum_k (a;q)_k / (q;q)_k x^k` for `|x| < 1`, float mode only.
///
/// Terms satisfy `c_{k+1} / c_k = (1 - a q^k) x / (1 - q^{k+1})`, whose modulus
/// beyond index `K` is at most `rho_K = |x| (1 + |a| q^K) / (1 - q^{K+1})`.
/// Once `rho_K < 1` the tail is dominated by `|c_K| / (1 - rho_K)`.
pub fn q_binomial_theorem_series<S: Scalar>(
    a: &S,
    x: &S,
    q: &S,
    tail_tol: f64,
) -> Result<(S, TruncationCertificate)> {
    require_float::<S>("q-binomial series")?;
    check_q(q)?;
    check_tail_tol(tail_tol)?;
    let (a, x, q) = (a.to_f64(), x.to_f64(), q.to_f64());
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::InvalidDomain(format!(
            "q-binomial series needs |x| < 1, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok((S::one(), TruncationCertificate::exact(1)));
    }
    let mut sum = 0.0f64;
    let mut term = 1.0f64;
    let mut qk = 1.0f64;
    let mut rounding = 0.0f64;
    let mut k = 0usize;
    loop {
        let rho = x.abs() * (1.0 + a.abs() * qk) / (1.0 - qk * q);
        if term == 0.0 {
            break;
        }
        if rho < 1.0 {
            let tail = term.abs() / (1.0 - rho);
            if tail <= tail_tol / 2.0 {
                let tail = tail + 1.01 * rounding;
                return Ok((
                    S::from_f64(sum),
                    TruncationCertificate {
                        n_terms: k,
                        tail_bound: tail,
                    },
                ));
            }
        }
        sum += term;
        rounding += UNIT_ROUNDOFF * ((4 * k + 4) as f64 * term.abs() + sum.abs());
        term *= (1.0 - a * qk) * x / (1.0 - qk * q);
        qk *= q;
        k += 1;
    }
    Ok((
        S::from_f64(sum),
        TruncationCertificate {
            n_terms: k,
            tail_bound: 1.01 * rounding,
        },
    ))
}

/// Bound on `|a_hat / b_hat - a / b|` given `|a - a_hat| <= da`, `|b - b_hat| <= db`.
pub(crate) fn ratio_error_bound(a_hat: f64, da: f64, b_hat: f64, db: f64) -> f64 {
    let b = b_hat.abs();
    if db >= b {
        return f64::INFINITY;
    }
    (a_hat.abs() * db + b * da) / (b * (b - db))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rational_of, Rational};

    fn r(n: i64, d: i64) -> Rational {
        rational_of(n, d).unwrap()
    }

    #[test]
    fn q_integer_examples() {
        let half = r(1, 2);
        assert_eq!(q_integer(0, &half).unwrap(), r(0, 1));
        assert_eq!(q_integer(1, &r(1, 3)).unwrap(), r(1, 1));
        assert_eq!(q_integer(3, &half).unwrap(), r(7, 4));
        assert!((q_integer(3, &0.5f64).unwrap() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn q_outside_unit_interval_is_rejected() {
        for bad in [r(0, 1), r(1, 1), r(3, 2), r(-1, 2)] {
            assert!(matches!(q_integer(2, &bad), Err(Error::InvalidQ(_))));
        }
        assert!(QParams::new(0.5f64, -0.1).is_err());
    }

    #[test]
    fn q_factorial_examples() {
        let half = r(1, 2);
        assert_eq!(q_factorial(0, &half).unwrap(), r(1, 1));
        assert_eq!(q_factorial(2, &half).unwrap(), r(3, 2));
        assert_eq!(q_factorial(4, &half).unwrap(), r(315, 64));
    }

    #[test]
    fn q_pochhammer_examples() {
        let half = r(1, 2);
        assert_eq!(q_pochhammer(&r(5, 7), &half, 0).unwrap(), r(1, 1));
        assert_eq!(q_pochhammer(&r(0, 1), &half, 6).unwrap(), r(1, 1));
        assert_eq!(q_pochhammer(&half, &half, 2).unwrap(), r(3, 8));
    }

    #[test]
    fn q_binomial_examples() {
        let half = r(1, 2);
        assert_eq!(q_binomial(5, 0, &half).unwrap(), r(1, 1));
        assert_eq!(q_binomial(5, 5, &half).unwrap(), r(1, 1));
        assert_eq!(q_binomial(4, 2, &half).unwrap(), r(35, 16));
        assert_eq!(q_binomial(3, 1, &half).unwrap(), r(7, 4));
        assert_eq!(
            q_binomial(3, 4, &half),
            Err(Error::IndexOutOfRange { k: 4, n: 3 })
        );
    }

    #[test]
    fn exact_q_identities() {
        for q in [r(1, 4), r(1, 2), r(3, 4), r(2, 7)] {
            for n in 0..=16usize {
                let qn = q_integer(n, &q).unwrap();
                assert_eq!(
                    q_integer(n + 1, &q).unwrap(),
                    Rational::one() + q.clone() * qn.clone()
                );
                for k in 0..=n {
                    let split = q_integer(k, &q).unwrap()
                        + q.powi(k as u32) * q_integer(n - k, &q).unwrap();
                    assert_eq!(split, qn);
                    assert_eq!(
                        q_binomial(n, k, &q).unwrap(),
                        q_binomial_pochhammer(n, k, &q).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn pochhammer_shift_property() {
        let q = r(2, 5);
        for a in [r(1, 3), r(-2, 3), r(7, 5)] {
            for m in 0..10usize {
                let next = q_pochhammer(&a, &q, m + 1).unwrap();
                let aq = a.clone() * q.clone();
                assert_eq!(
                    next,
                    (Rational::one() - a.clone()) * q_pochhammer(&aq, &q, m).unwrap()
                );
                assert_eq!(
                    next,
                    q_pochhammer(&a, &q, m).unwrap()
                        * (Rational::one() - a.clone() * q.powi(m as u32))
                );
            }
        }
    }

    #[test]
    fn infinite_pochhammer_edge_cases() {
        let (v, c) = q_pochhammer_infinite(&0.0f64, &0.5, 1e-12).unwrap();
        assert_eq!((v, c.tail_bound), (1.0, 0.0));
        let (v, c) = q_pochhammer_infinite(&1.0f64, &0.5, 1e-12).unwrap();
        assert_eq!((v, c.tail_bound), (0.0, 0.0));
        assert!(matches!(
            q_pochhammer_infinite(&r(1, 2), &r(1, 2), 1e-12),
            Err(Error::ExactModeUnsupported(_))
        ));
        assert!(matches!(
            q_pochhammer_infinite(&-0.1f64, &0.5, 1e-12),
            Err(Error::InvalidDomain(_))
        ));
        assert!(matches!(
            q_pochhammer_infinite(&1.1f64, &0.5, 1e-12),
            Err(Error::InvalidDomain(_))
        ));
    }

    #[test]
    fn infinite_pochhammer_half_half() {
        let (v, c) = q_pochhammer_infinite(&0.5f64, &0.5, 1e-12).unwrap();
        assert!(v > 0.0 && v < 1.0);
        // q^N / (1 - q) <= 1e-12 first holds at N = 41 for q = 1/2.
        assert_eq!(c.n_terms, 41);
        assert!(c.tail_bound <= 1e-12);
        // Partial products are nonincreasing.
        let mut prev = 1.0;
        for m in 0..60 {
            let p = q_pochhammer_raw(&0.5f64, &0.5, m);
            assert!(p <= prev);
            prev = p;
        }
        let deep = q_pochhammer_raw(&0.5f64, &0.5, 400);
        assert!((v - deep).abs() <= c.tail_bound);
        assert!(v >= deep);
    }

    #[test]
    fn truncation_index_matches_definition() {
        for q in [0.05, 0.3, 0.5, 0.9, 0.95] {
            for tol in [1e-3, 1e-8, 1e-12] {
                let n = truncation_index(q, tol);
                assert!(q.powi(n as i32) / (1.0 - q) <= tol * (1.0 + 1e-12));
                if n > 0 {
                    assert!(q.powi(n as i32 - 1) / (1.0 - q) > tol * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn product_identity_examples() {
        let q = r(1, 2);
        assert!(verify_product_identity(&r(1, 3), &r(1, 2), &q, 0).unwrap());
        assert!(verify_product_identity(&r(0, 1), &r(2, 3), &q, 7).unwrap());
        assert!(verify_product_identity(&r(1, 3), &r(1, 2), &q, 5).unwrap());
        let (lhs, rhs) = product_identity_sides(&r(0, 1), &r(2, 3), &q, 4).unwrap();
        assert_eq!(lhs, Rational::one());
        assert_eq!(rhs, Rational::one());
    }

    #[test]
    fn q_binomial_series_examples() {
        let (v, c) = q_binomial_theorem_series(&0.3f64, &0.0, &0.5, 1e-12).unwrap();
        assert_eq!((v, c.tail_bound), (1.0, 0.0));
        assert!(q_binomial_theorem_series(&0.3f64, &1.0, &0.5, 1e-12).is_err());
        assert!(q_binomial_theorem_series(&r(1, 3), &r(1, 3), &r(1, 2), 1e-12).is_err());

        // a = 0: sum x^k / (q;q)_k = 1 / (x;q)_inf
        let (lhs, c) = q_binomial_theorem_series(&0.0f64, &0.4, &0.5, 1e-12).unwrap();
        let (den, cd) = q_pochhammer_infinite(&0.4f64, &0.5, 1e-12).unwrap();
        let slack = c.tail_bound + ratio_error_bound(1.0, 0.0, den, cd.tail_bound);
        assert!((lhs - 1.0 / den).abs() <= slack);

        let (lhs, c) = q_binomial_theorem_series(&0.5f64, &(1.0 / 3.0), &0.5, 1e-12).unwrap();
        let (num, cn) = q_pochhammer_infinite(&(0.5f64 / 3.0), &0.5, 1e-12).unwrap();
        let (den, cd) = q_pochhammer_infinite(&(1.0f64 / 3.0), &0.5, 1e-12).unwrap();
        let slack = c.tail_bound + ratio_error_bound(num, cn.tail_bound, den, cd.tail_bound);
        assert!((lhs - num / den).abs() <= slack, "{lhs} vs {}", num / den);
    }

    #[test]
    fn gamma_and_shift() {
        let p = QParams::new(r(1, 2), r(1, 4)).unwrap();
        assert_eq!(p.gamma(), r(1, 2));
        assert_eq!(p.shifted().alpha(), &r(1, 10));
    }
}
