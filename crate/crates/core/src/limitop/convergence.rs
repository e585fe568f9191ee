use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{limit_apply, SeriesEvaluation};
use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::qcore::{q_integer_raw, QParams, UNIT_ROUNDOFF};
use crate::stancu::{apply, check_unit_interval};

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `max_x |S_n(f; x) - S_inf(f; x)|` over the grid.
    pub sup_error: f64,
    pub argmax_x: f64,
    /// Largest tail bound plus rounding estimate over the grid.
    pub uncertainty: f64,
    /// `max_x x(1-x)/(1+alpha) |1/[n] - (1-q)|` scaled by the quadratic
    /// coefficient, present only when `f` is a polynomial of degree <= 2.
    pub analytic_gap: Option<f64>,
}

/// `x(1-x)/(1+alpha) |1/[n]_q - (1-q)|`, the exact value of
/// `|S_n(e_2; x) - S_inf(e_2; x)|`.
pub fn quadratic_gap(params: &QParams<f64>, n: usize, x: f64) -> f64 {
    let q = *params.q();
    let alpha = *params.alpha();
    x * (1.0 - x) / (1.0 + alpha) * (1.0 / q_integer_raw(n, &q) - (1.0 - q)).abs()
}

/// Coefficient of `t^2` when `f` has degree at most 2.
fn quadratic_coefficient(f: &SampledFunction<f64>) -> Option<f64> {
    match f {
        SampledFunction::Monomial(m) if *m <= 2 => Some(if *m == 2 { 1.0 } else { 0.0 }),
        SampledFunction::Polynomial(c) if c.len() <= 3 => Some(c.get(2).copied().unwrap_or(0.0)),
        _ => None,
    }
}

/// Sup-error of `S_n(f)` against `S_inf(f)` over `grid` for `n = 1..=n_max`.
pub fn convergence_experiment(
    params: &QParams<f64>,
    f: &SampledFunction<f64>,
    n_max: usize,
    grid: &[f64],
    tail_tol: f64,
) -> Result<Vec<ConvergenceRow>> {
    if n_max == 0 {
        return Err(Error::InvalidDegree);
    }
    if grid.is_empty() {
        return Err(Error::InvalidDomain(
            "grid must contain at least one point".into(),
        ));
    }
    for x in grid {
        check_unit_interval(x)?;
    }
    let limits: Vec<SeriesEvaluation<f64>> = grid
        .par_iter()
        .map(|x| limit_apply(params, f, x, tail_tol))
        .collect::<Result<_>>()?;
    let sup = f.sup_norm_bound();
    let c2 = quadratic_coefficient(f);

    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let rounding = UNIT_ROUNDOFF * (8 * n + 8) as f64 * sup;
            let mut row = ConvergenceRow {
                n,
                sup_error: 0.0,
                argmax_x: grid[0],
                uncertainty: 0.0,
                analytic_gap: c2.map(|_| 0.0),
            };
            for (x, lim) in grid.iter().zip(&limits) {
                let err = (apply(params, n, f, x)? - lim.value).abs();
                if err > row.sup_error {
                    row.sup_error = err;
                    row.argmax_x = *x;
                }
                row.uncertainty = row.uncertainty.max(lim.tail_bound + rounding);
                if let (Some(c), Some(g)) = (c2, row.analytic_gap.as_mut()) {
                    *g = g.max(c.abs() * quadratic_gap(params, n, *x));
                }
            }
            Ok(row)
        })
        .collect()
}
