use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Scalar;
use crate::qcore::{q_binomial_row, q_pochhammer_raw, QParams};

/// Which formula produced a [`BasisVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    /// Products of `x + alpha [i]_q` and `1 - q^i x + alpha [i]_q`.
    ProductForm,
    /// q-Pochhammer symbols in `gamma / (x + gamma)` and `(x + gamma) / (1 + gamma)`.
    PochhammerForm,
}

/// `p_{n,0}(x) .. p_{n,n}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector<S> {
    pub n: usize,
    pub values: Vec<S>,
    pub representation: Representation,
}

impl<S: Scalar> BasisVector<S> {
    pub fn sum(&self) -> S {
        self.values.iter().cloned().fold(S::zero(), |a, b| a + b)
    }
}

pub(crate) fn check_unit_interval<S: Scalar>(x: &S) -> Result<()> {
    if *x >= S::zero() && *x <= S::one() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!(
            "x must lie in [0, 1], got {x}"
        )))
    }
}

/// `prod_{i<k} (x + alpha [i]_q)`.
pub fn rising_product_x<S: Scalar>(params: &QParams<S>, x: &S, k: usize) -> S {
    let (q, alpha) = (params.q(), params.alpha());
    let mut acc = S::one();
    let mut qi = S::zero();
    for _ in 0..k {
        acc = acc * (x.clone() + alpha.clone() * qi.clone());
        qi = S::one() + q.clone() * qi;
    }
    acc
}

/// `prod_{i<j} (1 - q^i x + alpha [i]_q)`.
pub fn falling_product_x<S: Scalar>(params: &QParams<S>, x: &S, j: usize) -> S {
    let (q, alpha) = (params.q(), params.alpha());
    let mut acc = S::one();
    let mut qi = S::zero();
    let mut qpow = S::one();
    for _ in 0..j {
        acc = acc * (S::one() - qpow.clone() * x.clone() + alpha.clone() * qi.clone());
        qi = S::one() + q.clone() * qi;
        qpow = qpow * q.clone();
    }
    acc
}

/// Product-form basis; defined at every `x` in `[0, 1]` and every `alpha >= 0`.
pub fn basis_product_form<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    x: &S,
) -> Result<BasisVector<S>> {
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    check_unit_interval(x)?;
    Ok(product_form_unchecked(params, n, x))
}

/// Same as [`basis_product_form`] but also accepts `n = 0` (the single
/// function `p_{0,0} = 1`), which the degree-lowering identities reach.
pub(crate) fn product_form_unchecked<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    x: &S,
) -> BasisVector<S> {
    let binom = q_binomial_row(n, params.q());
    let denom = stancu_denominator(params, n);
    let values = binom
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c * rising_product_x(params, x, k) * falling_product_x(params, x, n - k) / denom.clone()
        })
        .collect();
    BasisVector {
        n,
        values,
        representation: Representation::ProductForm,
    }
}

/// `prod_{i<n} (1 + alpha [i]_q)`.
fn stancu_denominator<S: Scalar>(params: &QParams<S>, n: usize) -> S {
    let (q, alpha) = (params.q(), params.alpha());
    let mut acc = S::one();
    let mut qi = S::zero();
    for _ in 0..n {
        acc = acc * (S::one() + alpha.clone() * qi.clone());
        qi = S::one() + q.clone() * qi;
    }
    acc
}

/// q-Pochhammer-form basis. Undefined when `x + gamma = 0` (`alpha = 0`, `x = 0`).
pub fn basis_pochhammer_form<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    x: &S,
) -> Result<BasisVector<S>> {
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    check_unit_interval(x)?;
    pochhammer_form_unchecked(params, n, x)
}

pub(crate) fn pochhammer_form_unchecked<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    x: &S,
) -> Result<BasisVector<S>> {
    let q = params.q();
    let gamma = params.gamma();
    let x_gamma = x.clone() + gamma.clone();
    if x_gamma.is_zero() {
        return Err(Error::DegeneratePoint);
    }
    let one_gamma = S::one() + gamma.clone();
    let ratio = x_gamma.clone() / one_gamma.clone();
    let inner = gamma.clone() / x_gamma;
    let base = gamma / one_gamma;
    let denom = q_pochhammer_raw(&base, q, n);
    let values = q_binomial_row(n, q)
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c * ratio.powi(k as u32)
                * q_pochhammer_raw(&inner, q, k)
                * q_pochhammer_raw(&ratio, q, n - k)
                / denom.clone()
        })
        .collect();
    Ok(BasisVector {
        n,
        values,
        representation: Representation::PochhammerForm,
    })
}
