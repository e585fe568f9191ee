//! Finite-degree q-Stancu operators.
//!
//! `S_n(f; x) = sum_k f([k]_q / [n]_q) p_{n,k}(x)` with the basis available in
//! product form and in q-Pochhammer form. The two are algebraically equal;
//! the Pochhammer form is used by default and the product form takes over at
//! the single point (`alpha = 0`, `x = 0`) where the former is 0/0.

mod basis;
mod moments;
pub mod qbernstein;

pub use basis::{
    basis_pochhammer_form, basis_product_form, falling_product_x, rising_product_x, BasisVector,
    Representation,
};
pub use moments::{
    basis_recurrence_check, basis_recurrence_sides, moment_closed_form, moment_recurrence_binomial,
    moment_recurrence_videnskii,
};

pub(crate) use basis::check_unit_interval;

use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::numerics::Scalar;
use crate::qcore::{q_integers_upto, QParams};

/// Largest degree accepted in exact mode unless overridden.
pub const DEFAULT_EXACT_DEGREE_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormPolicy {
    /// Pochhammer form, product form at degenerate points.
    #[default]
    Auto,
    ProductOnly,
    PochhammerOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StancuOptions {
    pub form: FormPolicy,
    pub exact_degree_cap: usize,
}

impl Default for StancuOptions {
    fn default() -> Self {
        StancuOptions {
            form: FormPolicy::Auto,
            exact_degree_cap: DEFAULT_EXACT_DEGREE_CAP,
        }
    }
}

impl StancuOptions {
    pub(crate) fn check_degree<S: Scalar>(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidDegree);
        }
        if S::KIND.is_exact() && n > self.exact_degree_cap {
            return Err(Error::DegreeTooLarge {
                n,
                cap: self.exact_degree_cap,
            });
        }
        Ok(())
    }
}

/// Basis at `x` chosen according to `opts.form`.
pub fn basis<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    x: &S,
    opts: &StancuOptions,
) -> Result<BasisVector<S>> {
    opts.check_degree::<S>(n)?;
    check_unit_interval(x)?;
    basis_any_degree(params, n, x, opts.form)
}

/// Also valid for `n = 0`; callers validate `x`.
pub(crate) fn basis_any_degree<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    x: &S,
    form: FormPolicy,
) -> Result<BasisVector<S>> {
    match form {
        FormPolicy::ProductOnly => Ok(basis::product_form_unchecked(params, n, x)),
        FormPolicy::PochhammerOnly => basis::pochhammer_form_unchecked(params, n, x),
        FormPolicy::Auto => match basis::pochhammer_form_unchecked(params, n, x) {
            Err(Error::DegeneratePoint) => Ok(basis::product_form_unchecked(params, n, x)),
            other => other,
        },
    }
}

/// `S_n^{q,alpha}(f; x)` with default options.
pub fn apply<S: Scalar>(params: &QParams<S>, n: usize, f: &SampledFunction<S>, x: &S) -> Result<S> {
    apply_with(params, n, f, x, &StancuOptions::default())
}

pub fn apply_with<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    f: &SampledFunction<S>,
    x: &S,
    opts: &StancuOptions,
) -> Result<S> {
    let b = basis(params, n, x, opts)?;
    let qi = q_integers_upto(n, params.q());
    let mut acc = S::zero();
    for (k, p) in b.values.into_iter().enumerate() {
        let node = qi[k].clone() / qi[n].clone();
        acc = acc + f.eval(&node)? * p;
    }
    Ok(acc)
}

/// Nodes `[k]_q / [n]_q`, `k = 0..=n`.
pub fn nodes<S: Scalar>(params: &QParams<S>, n: usize) -> Vec<S> {
    let qi = q_integers_upto(n, params.q());
    qi.iter().map(|v| v.clone() / qi[n].clone()).collect()
}
