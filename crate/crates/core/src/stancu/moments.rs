use std::collections::HashMap;

use super::{apply_with, basis_any_degree, check_unit_interval, FormPolicy, StancuOptions};
use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::numerics::{binomial, Scalar, Tolerance};
use crate::qcore::{q_integer_raw, QParams};

/// `S_n(e_m; x)` for `m` in `{0, 1, 2}`.
pub fn moment_closed_form<S: Scalar>(params: &QParams<S>, n: usize, m: usize, x: &S) -> Result<S> {
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    match m {
        0 => Ok(S::one()),
        1 => Ok(x.clone()),
        2 => {
            let alpha = params.alpha().clone();
            let qn = q_integer_raw(n, params.q());
            let inner =
                x.clone() * (x.clone() + alpha.clone()) + x.clone() * (S::one() - x.clone()) / qn;
            Ok(inner / (S::one() + alpha))
        }
        _ => Err(Error::UnsupportedOrder(m)),
    }
}

#[derive(Clone, Copy)]
enum Shift {
    /// `x -> (x + alpha) / (1 + alpha)`
    Affine,
    /// `x -> q x / (1 + alpha)`
    Scaled,
}

/// Parameter chain of a degree-lowering recurrence. Level `l` holds
/// `(alpha_l, x_l)`; a call rooted at degree `n` visits degree `n - l` only at
/// level `l`, so `(degree, order)` is an exact memo key within one chain.
struct Chain<S> {
    root_n: usize,
    shift: Shift,
    levels: Vec<(QParams<S>, S)>,
    memo: HashMap<(usize, usize), S>,
    opts: StancuOptions,
}

impl<S: Scalar> Chain<S> {
    fn new(params: &QParams<S>, n: usize, x: &S, shift: Shift, opts: StancuOptions) -> Self {
        Chain {
            root_n: n,
            shift,
            levels: vec![(params.clone(), x.clone())],
            memo: HashMap::new(),
            opts,
        }
    }

    fn level(&mut self, n: usize) -> (QParams<S>, S) {
        let l = self.root_n - n;
        while self.levels.len() <= l {
            let (p, x) = self.levels.last().cloned().expect("chain is never empty");
            let alpha = p.alpha().clone();
            let nx = match self.shift {
                Shift::Affine => (x + alpha.clone()) / (S::one() + alpha),
                Shift::Scaled => p.q().clone() * x / (S::one() + alpha),
            };
            self.levels.push((p.shifted(), nx));
        }
        self.levels[l].clone()
    }

    /// `S_1(e_j; x) = x` for `j >= 1`, computed by direct summation over nodes {0, 1}.
    fn base(&mut self, j: usize) -> Result<S> {
        let (p, x) = self.level(1);
        apply_with(&p, 1, &SampledFunction::monomial(j as u32), &x, &self.opts)
    }

    /// `S_n(e_j)` via `S_n(e_{m+1}) = x / [n]^m sum_s C(m,s) q^s [n-1]^s S'_{n-1}(e_s)`.
    fn binomial_form(&mut self, n: usize, j: usize) -> Result<S> {
        if j == 0 {
            return Ok(S::one());
        }
        if let Some(v) = self.memo.get(&(n, j)) {
            return Ok(v.clone());
        }
        let value = if n == 1 {
            self.base(j)?
        } else {
            let (p, x) = self.level(n);
            let q = p.q().clone();
            let m = j - 1;
            let qn = q_integer_raw(n, &q);
            let qn1 = q_integer_raw(n - 1, &q);
            let mut acc = S::zero();
            for s in 0..=m {
                let lower = self.binomial_form(n - 1, s)?;
                acc = acc
                    + S::from_int(binomial(m, s))
                        * (q.clone() * qn1.clone()).powi(s as u32)
                        * lower;
            }
            x * acc / qn.powi(m as u32)
        };
        self.memo.insert((n, j), value.clone());
        Ok(value)
    }

    /// `S_n(e_j)` via `S_n(e_{m+1}) = S_n(e_m) - (1-x) ([n-1]/[n])^m S'_{n-1}(e_m)`.
    fn difference_form(&mut self, n: usize, j: usize) -> Result<S> {
        if j == 0 {
            return Ok(S::one());
        }
        if let Some(v) = self.memo.get(&(n, j)) {
            return Ok(v.clone());
        }
        let value = if n == 1 {
            self.base(j)?
        } else {
            let (p, x) = self.level(n);
            let q = p.q().clone();
            let m = j - 1;
            let ratio = q_integer_raw(n - 1, &q) / q_integer_raw(n, &q);
            let same = self.difference_form(n, m)?;
            let lower = self.difference_form(n - 1, m)?;
            same - (S::one() - x) * ratio.powi(m as u32) * lower
        };
        self.memo.insert((n, j), value.clone());
        Ok(value)
    }
}

fn check_args<S: Scalar>(n: usize, x: &S, opts: &StancuOptions) -> Result<()> {
    opts.check_degree::<S>(n)?;
    check_unit_interval(x)
}

/// `S_n(e_{m+1}; x)` unrolled through the binomial recurrence down to degree 1.
pub fn moment_recurrence_binomial<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    m: usize,
    x: &S,
) -> Result<S> {
    let opts = StancuOptions::default();
    check_args(n, x, &opts)?;
    Chain::new(params, n, x, Shift::Affine, opts).binomial_form(n, m + 1)
}

/// `S_n(e_{m+1}; x)` unrolled through the difference recurrence down to degree 1.
pub fn moment_recurrence_videnskii<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    m: usize,
    x: &S,
) -> Result<S> {
    let opts = StancuOptions::default();
    check_args(n, x, &opts)?;
    Chain::new(params, n, x, Shift::Scaled, opts).difference_form(n, m + 1)
}

/// Both sides of `([k]/[n]) p_{n,k}(x) = p_{n,k}(x) - (1-x) p'_{n-1,k}(q x / (1 + alpha))`,
/// with `p'_{n-1,n} := 0`.
pub fn basis_recurrence_sides<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    k: usize,
    x: &S,
) -> Result<(S, S)> {
    let opts = StancuOptions::default();
    check_args(n, x, &opts)?;
    if k > n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    let q = params.q();
    let p_nk = basis_any_degree(params, n, x, FormPolicy::Auto)?.values[k].clone();
    let lhs = q_integer_raw(k, q) / q_integer_raw(n, q) * p_nk.clone();
    let shifted_x = q.clone() * x.clone() / (S::one() + params.alpha().clone());
    let lower = if k < n {
        basis_any_degree(&params.shifted(), n - 1, &shifted_x, FormPolicy::Auto)?.values[k].clone()
    } else {
        S::zero()
    };
    let rhs = p_nk - (S::one() - x.clone()) * lower;
    Ok((lhs, rhs))
}

pub fn basis_recurrence_check<S: Scalar>(
    params: &QParams<S>,
    n: usize,
    k: usize,
    x: &S,
) -> Result<bool> {
    let (lhs, rhs) = basis_recurrence_sides(params, n, k, x)?;
    Ok(lhs.approx_eq(&rhs, &Tolerance::FINITE))
}
