//! Plain q-Bernstein polynomials, coded directly from
//! `b_{n,k}(x) = [n k]_q x^k (x; q)_{n-k}` without going through the Stancu
//! machinery. Used as the reference for the `alpha = 0` reduction.

use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::numerics::Scalar;
use crate::qcore::{check_q, q_binomial, q_integer, q_pochhammer};

pub fn q_bernstein_basis<S: Scalar>(q: &S, n: usize, x: &S) -> Result<Vec<S>> {
    check_q(q)?;
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    (0..=n)
        .map(|k| Ok(q_binomial(n, k, q)? * x.powi(k as u32) * q_pochhammer(x, q, n - k)?))
        .collect()
}

pub fn q_bernstein_apply<S: Scalar>(q: &S, n: usize, f: &SampledFunction<S>, x: &S) -> Result<S> {
    let basis = q_bernstein_basis(q, n, x)?;
    let qn = q_integer(n, q)?;
    let mut acc = S::zero();
    for (k, b) in basis.into_iter().enumerate() {
        acc = acc + f.eval(&(q_integer(k, q)? / qn.clone()))? * b;
    }
    Ok(acc)
}
