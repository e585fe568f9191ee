//! The limit q-Stancu operator
//!
//! ```text
//! S_inf(f; x) = sum_k f(1 - q^k) p_inf_k(x)   for x in [0, 1)
//!             = f(1)                          for x = 1
//! p_inf_k(x)  = C(x) * (b; q)_k r^k / (q; q)_k
//! r = (x + gamma) / (1 + gamma),  b = gamma / (x + gamma),
//! C(x) = (r; q)_inf / (gamma / (1 + gamma); q)_inf
//! ```
//!
//! Series values carry a bound that covers the truncated infinite products,
//! the discarded series tail and a running floating-point rounding estimate.
//! Moments have a finite closed form ([`limit_moment_general`]) that is exact
//! in rational mode and serves as the reference for everything else here.

mod convergence;

pub use convergence::{convergence_experiment, quadratic_gap, ConvergenceRow};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::numerics::{binomial, Scalar};
use crate::qcore::{
    check_tail_tol, pochhammer_infinite_f64, ratio_error_bound, require_float, QParams,
    TruncationCertificate, UNIT_ROUNDOFF,
};
use crate::stancu::check_unit_interval;

/// Points with `x > 1 - DEFAULT_ENDPOINT_SWITCH` are evaluated through the `x = 1` clause.
pub const DEFAULT_ENDPOINT_SWITCH: f64 = 1.0 / 1048576.0;
pub const DEFAULT_MAX_TERMS: usize = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOptions {
    pub endpoint_switch: f64,
    pub max_terms: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            endpoint_switch: DEFAULT_ENDPOINT_SWITCH,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitBasisValue<S> {
    pub k: usize,
    pub value: S,
    pub certificate: TruncationCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvaluation<S> {
    pub value: S,
    pub terms_used: usize,
    pub tail_bound: f64,
    /// Set when `x` was within the endpoint switch of 1 and `f(1)` was
    /// returned; `tail_bound` is then infinite.
    pub endpoint_clamped: bool,
}

/// Quantities shared by every `p_inf_k(x)` at a fixed `x < 1`.
struct LimitFrame {
    q: f64,
    ratio: f64,
    inner: f64,
    prefactor: f64,
    prefactor_err: f64,
    n_terms: usize,
}

impl LimitFrame {
    /// `None` when `x + gamma = 0`, where all mass sits at `k = 0`.
    fn new(params: &QParams<f64>, x: f64, tol: f64) -> Option<Self> {
        let q = *params.q();
        let gamma = params.gamma();
        let x_gamma = x + gamma;
        if x_gamma == 0.0 {
            return None;
        }
        let ratio = x_gamma / (1.0 + gamma);
        let inner = gamma / x_gamma;
        let base = gamma / (1.0 + gamma);
        let (prefactor, prefactor_err, n_terms) = prefactor(ratio, base, q, tol);
        Some(LimitFrame {
            q,
            ratio,
            inner,
            prefactor,
            prefactor_err,
            n_terms,
        })
    }
}

/// `(r;q)_inf / (g;q)_inf` with an error bound, tightening the product
/// tolerances until the bound meets `tol` or stops improving.
fn prefactor(ratio: f64, base: f64, q: f64, tol: f64) -> (f64, f64, usize) {
    let mut product_tol = tol / 2.0;
    let mut best = (f64::NAN, f64::INFINITY, 0usize);
    for _ in 0..12 {
        let (num, cn) = pochhammer_infinite_f64(ratio, q, product_tol);
        let (den, cd) = pochhammer_infinite_f64(base, q, product_tol);
        let value = num / den;
        let err = ratio_error_bound(num, cn.tail_bound, den, cd.tail_bound)
            + 2.0 * UNIT_ROUNDOFF * value.abs();
        let n_terms = cn.n_terms.max(cd.n_terms);
        if err < best.1 {
            best = (value, err, n_terms);
        }
        if err <= tol || product_tol < 1e-300 {
            break;
        }
        product_tol *= 0.5 * tol / err;
    }
    best
}

fn as_f64_params<S: Scalar>(params: &QParams<S>) -> Result<QParams<f64>> {
    QParams::new(params.q().to_f64(), params.alpha().to_f64())
}

/// `p_inf_k(x)`, float mode only.
pub fn limit_basis<S: Scalar>(
    params: &QParams<S>,
    k: usize,
    x: &S,
    tail_tol: f64,
) -> Result<LimitBasisValue<S>> {
    let mut v = limit_basis_values(params, k, x, tail_tol)?;
    Ok(v.pop().expect("k + 1 values"))
}

/// `p_inf_0(x) .. p_inf_{k_max}(x)`, sharing the infinite products.
pub fn limit_basis_values<S: Scalar>(
    params: &QParams<S>,
    k_max: usize,
    x: &S,
    tail_tol: f64,
) -> Result<Vec<LimitBasisValue<S>>> {
    require_float::<S>("limit basis")?;
    check_tail_tol(tail_tol)?;
    check_unit_interval(x)?;
    let pf = as_f64_params(params)?;
    let xf = x.to_f64();
    let exact = |k: usize, v: f64| LimitBasisValue {
        k,
        value: S::from_f64(v),
        certificate: TruncationCertificate::exact(0),
    };
    if xf == 1.0 {
        return Ok((0..=k_max).map(|k| exact(k, 0.0)).collect());
    }
    let Some(frame) = LimitFrame::new(&pf, xf, tail_tol) else {
        return Ok((0..=k_max)
            .map(|k| exact(k, if k == 0 { 1.0 } else { 0.0 }))
            .collect());
    };
    let mut out = Vec::with_capacity(k_max + 1);
    let mut u = 1.0f64;
    let mut qk = 1.0f64;
    for k in 0..=k_max {
        let value = frame.prefactor * u;
        let rounding = UNIT_ROUNDOFF * (5 * k + 5) as f64 * value.abs();
        out.push(LimitBasisValue {
            k,
            value: S::from_f64(value),
            certificate: TruncationCertificate {
                n_terms: frame.n_terms,
                tail_bound: frame.prefactor_err * u + rounding,
            },
        });
        u *= (1.0 - frame.inner * qk) * frame.ratio / (1.0 - qk * frame.q);
        qk *= frame.q;
    }
    Ok(out)
}

/// `S_inf(f; x)` with default options.
pub fn limit_apply<S: Scalar>(
    params: &QParams<S>,
    f: &SampledFunction<S>,
    x: &S,
    tail_tol: f64,
) -> Result<SeriesEvaluation<S>> {
    limit_apply_with(params, f, x, tail_tol, &LimitOptions::default())
}

pub fn limit_apply_with<S: Scalar>(
    params: &QParams<S>,
    f: &SampledFunction<S>,
    x: &S,
    tail_tol: f64,
    opts: &LimitOptions,
) -> Result<SeriesEvaluation<S>> {
    require_float::<S>("limit operator series")?;
    check_tail_tol(tail_tol)?;
    check_unit_interval(x)?;
    let pf = as_f64_params(params)?;
    let xf = x.to_f64();
    let eval = |t: f64| -> Result<f64> { Ok(f.eval(&S::from_f64(t))?.to_f64()) };
    let f_units = f.eval_rounding_units();

    if xf == 1.0 || xf > 1.0 - opts.endpoint_switch {
        let clamped = xf != 1.0;
        return Ok(SeriesEvaluation {
            value: S::from_f64(eval(1.0)?),
            terms_used: 0,
            tail_bound: if clamped { f64::INFINITY } else { 0.0 },
            endpoint_clamped: clamped,
        });
    }
    let Some(frame) = LimitFrame::new(&pf, xf, tail_tol / 2.0) else {
        let v = eval(0.0)?;
        return Ok(SeriesEvaluation {
            value: S::from_f64(v),
            terms_used: 1,
            tail_bound: UNIT_ROUNDOFF * f_units * v.abs(),
            endpoint_clamped: false,
        });
    };

    let sup = f.sup_norm_bound();
    let c_hi = frame.prefactor + frame.prefactor_err;
    let q = frame.q;
    let mut partial = 0.0f64;
    let mut abs_weighted = 0.0f64;
    let mut rounding = 0.0f64;
    let mut u = 1.0f64;
    let mut qk = 1.0f64;
    let mut k = 0usize;
    let tail_abs = loop {
        if u == 0.0 {
            break 0.0;
        }
        let rho = frame.ratio / (1.0 - qk * q);
        if rho < 1.0 {
            let tail = sup * u / (1.0 - rho);
            if c_hi * tail <= tail_tol / 2.0 || k >= opts.max_terms {
                break tail;
            }
        } else if k >= opts.max_terms {
            break f64::INFINITY;
        }
        let fk = eval(1.0 - qk)?;
        let term = fk * u;
        partial += term;
        abs_weighted += term.abs();
        rounding += UNIT_ROUNDOFF * ((5 * k + 5) as f64 + f_units) * term.abs()
            + UNIT_ROUNDOFF * partial.abs();
        u *= (1.0 - frame.inner * qk) * frame.ratio / (1.0 - qk * q);
        qk *= q;
        k += 1;
    };
    let value = frame.prefactor * partial;
    let bound = frame.prefactor_err * (abs_weighted + tail_abs)
        + c_hi * tail_abs
        + c_hi * 1.01 * rounding
        + 2.0 * UNIT_ROUNDOFF * value.abs();
    Ok(SeriesEvaluation {
        value: S::from_f64(value),
        terms_used: k,
        tail_bound: bound,
        endpoint_clamped: false,
    })
}

/// `S_inf(e_m; x)` for `m` in `{0, 1, 2}`.
pub fn limit_moment_closed_form<S: Scalar>(params: &QParams<S>, m: usize, x: &S) -> Result<S> {
    match m {
        0 => Ok(S::one()),
        1 => Ok(x.clone()),
        2 => {
            let q = params.q().clone();
            Ok(x.clone()
                - q * x.clone() * (S::one() - x.clone()) / (S::one() + params.alpha().clone()))
        }
        _ => Err(Error::UnsupportedOrder(m)),
    }
}

/// `S_inf(e_m; x) = sum_s C(m,s) (-1)^s (r;q)_s / (g;q)_s`, a finite sum.
pub fn limit_moment_general<S: Scalar>(params: &QParams<S>, m: usize, x: &S) -> Result<S> {
    check_unit_interval(x)?;
    let q = params.q();
    let gamma = params.gamma();
    let one_gamma = S::one() + gamma.clone();
    let ratio = (x.clone() + gamma.clone()) / one_gamma.clone();
    let base = gamma / one_gamma;
    let mut acc = S::zero();
    let mut num = S::one();
    let mut den = S::one();
    let mut rq = ratio;
    let mut bq = base;
    for s in 0..=m {
        let c = S::from_int(binomial(m, s));
        let term = c * num.clone() / den.clone();
        acc = if s % 2 == 0 { acc + term } else { acc - term };
        num = num * (S::one() - rq.clone());
        den = den * (S::one() - bq.clone());
        rq = rq * q.clone();
        bq = bq * q.clone();
    }
    Ok(acc)
}

#[derive(Clone, Copy)]
enum LimitShift {
    Affine,
    Scaled,
}

/// Parameter chain for the limit recurrences, memoised on `(order, level)`.
struct LimitChain<S> {
    shift: LimitShift,
    levels: Vec<(QParams<S>, S)>,
    memo: HashMap<(usize, usize), S>,
}

impl<S: Scalar> LimitChain<S> {
    fn new(params: &QParams<S>, x: &S, shift: LimitShift) -> Self {
        LimitChain {
            shift,
            levels: vec![(params.clone(), x.clone())],
            memo: HashMap::new(),
        }
    }

    fn level(&mut self, l: usize) -> (QParams<S>, S) {
        while self.levels.len() <= l {
            let (p, x) = self.levels.last().cloned().expect("chain is never empty");
            let alpha = p.alpha().clone();
            let nx = match self.shift {
                LimitShift::Affine => (x + alpha.clone()) / (S::one() + alpha),
                LimitShift::Scaled => p.q().clone() * x / (S::one() + alpha),
            };
            self.levels.push((p.shifted(), nx));
        }
        self.levels[l].clone()
    }

    /// `S_inf(e_{m+1}) = S_inf(e_m) - (1 - x) S'_inf(e_m; q x / (1 + alpha))`
    fn difference_form(&mut self, j: usize, l: usize) -> S {
        if j == 0 {
            return S::one();
        }
        if let Some(v) = self.memo.get(&(j, l)) {
            return v.clone();
        }
        let (_, x) = self.level(l);
        let same = self.difference_form(j - 1, l);
        let lower = self.difference_form(j - 1, l + 1);
        let v = same - (S::one() - x) * lower;
        self.memo.insert((j, l), v.clone());
        v
    }

    /// `S_inf(e_{m+1}) = x sum_s C(m,s) q^s (1-q)^{m-s} S'_inf(e_s; (x + alpha) / (1 + alpha))`
    fn binomial_form(&mut self, j: usize, l: usize) -> S {
        if j == 0 {
            return S::one();
        }
        if let Some(v) = self.memo.get(&(j, l)) {
            return v.clone();
        }
        let (p, x) = self.level(l);
        let q = p.q().clone();
        let m = j - 1;
        let mut acc = S::zero();
        for s in 0..=m {
            let lower = self.binomial_form(s, l + 1);
            acc = acc
                + S::from_int(binomial(m, s))
                    * q.powi(s as u32)
                    * (S::one() - q.clone()).powi((m - s) as u32)
                    * lower;
        }
        let v = x * acc;
        self.memo.insert((j, l), v.clone());
        v
    }
}

/// `S_inf(e_{m+1}; x)` through the difference recurrence.
pub fn limit_recurrence<S: Scalar>(params: &QParams<S>, m: usize, x: &S) -> Result<S> {
    check_unit_interval(x)?;
    Ok(LimitChain::new(params, x, LimitShift::Scaled).difference_form(m + 1, 0))
}

/// `S_inf(e_{m+1}; x)` through the binomial recurrence.
pub fn limit_recurrence_binomial<S: Scalar>(params: &QParams<S>, m: usize, x: &S) -> Result<S> {
    check_unit_interval(x)?;
    Ok(LimitChain::new(params, x, LimitShift::Affine).binomial_form(m + 1, 0))
}
