use rayon::prelude::*;

use super::table::{Cell, Certificate, ColumnKind, ResultTable};
use super::{Outcome, RunConfig};
use crate::error::Result;
use crate::function::SampledFunction;
use crate::limitop::{
    convergence_experiment, limit_apply, limit_moment_closed_form, limit_moment_general,
    limit_recurrence, limit_recurrence_binomial,
};
use crate::numerics::{Rational, Scalar, Tolerance};
use crate::qcore::{QParams, UNIT_ROUNDOFF};
use crate::stancu::{
    apply, moment_closed_form, moment_recurrence_binomial, moment_recurrence_videnskii,
};

fn params<S: Scalar>(cfg: &RunConfig) -> Result<QParams<S>> {
    QParams::new(
        S::parse_scalar(&cfg.args.q)?,
        S::parse_scalar(&cfg.args.alpha)?,
    )
}

fn grid<S: Scalar>(cfg: &RunConfig) -> Result<Vec<S>> {
    cfg.grid.iter().map(|s| S::parse_scalar(s)).collect()
}

fn function<S: Scalar>(cfg: &RunConfig) -> Result<SampledFunction<S>> {
    cfg.args.function.parse()
}

fn optional<S: Scalar>(v: Option<S>) -> Cell {
    v.map_or(Cell::Null, |v| Cell::scalar(&v))
}

pub(super) fn eval(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.args.limit {
        eval_limit(cfg)
    } else if cfg.kind.is_exact() {
        eval_finite::<Rational>(cfg)
    } else {
        eval_finite::<f64>(cfg)
    }
}

fn eval_finite<S: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let p = params::<S>(cfg)?;
    let f = function::<S>(cfg)?;
    let xs = grid::<S>(cfg)?;
    let n = cfg.args.n;
    let values: Vec<S> = xs
        .par_iter()
        .map(|x| apply(&p, n, &f, x))
        .collect::<Result<_>>()?;

    let exact = S::KIND.is_exact();
    let mut columns = vec![
        ("x", ColumnKind::scalar::<S>()),
        ("value", ColumnKind::scalar::<S>()),
    ];
    if !exact {
        columns.push(("rounding_estimate", ColumnKind::Float));
    }
    let mut table = ResultTable::new(&columns);
    // Relative rounding of a length-(n+1) sum of positive weights times f.
    let rounding = UNIT_ROUNDOFF * (8 * n + 8) as f64 * f.sup_norm_bound();
    for (x, v) in xs.iter().zip(values) {
        let mut row = vec![Cell::scalar(x), Cell::scalar(&v)];
        if !exact {
            row.push(Cell::Float(rounding));
        }
        table.push(row);
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}

fn eval_limit(cfg: &RunConfig) -> Result<Outcome> {
    let p = params::<f64>(cfg)?;
    let f = function::<f64>(cfg)?;
    let xs = grid::<f64>(cfg)?;
    let tol = cfg.tail_tol;
    let values = xs
        .par_iter()
        .map(|x| limit_apply(&p, &f, x, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut table = ResultTable::new(&[
        ("x", ColumnKind::Float),
        ("value", ColumnKind::Float),
        ("tail_bound", ColumnKind::Float),
        ("terms_used", ColumnKind::Int),
        ("endpoint_clamped", ColumnKind::Bool),
    ]);
    for (i, (x, v)) in xs.iter().zip(values).enumerate() {
        table.push(vec![
            Cell::Float(*x),
            Cell::Float(v.value),
            Cell::Float(v.tail_bound),
            Cell::Int(v.terms_used as i64),
            Cell::Bool(v.endpoint_clamped),
        ]);
        table.certificates.push(Certificate {
            row: i,
            what: "limit series".into(),
            n_terms: v.terms_used,
            tail_bound: v.tail_bound,
        });
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}

pub(super) fn moments(cfg: &RunConfig) -> Result<Outcome> {
    match (cfg.args.limit, cfg.kind.is_exact()) {
        (false, true) => moments_finite::<Rational>(cfg),
        (false, false) => moments_finite::<f64>(cfg),
        (true, true) => moments_limit::<Rational>(cfg),
        (true, false) => moments_limit::<f64>(cfg),
    }
}

fn agree<S: Scalar>(reference: &S, others: &[&S]) -> bool {
    others
        .iter()
        .all(|o| reference.approx_eq(o, &Tolerance::FINITE))
}

fn moments_finite<S: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let p = params::<S>(cfg)?;
    let xs = grid::<S>(cfg)?;
    let n = cfg.args.n;
    let jobs: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| cfg.orders.iter().map(move |&m| (i, m)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, m)| {
            let x = &xs[i];
            let direct = apply(&p, n, &SampledFunction::monomial(m as u32), x)?;
            let (binom, diff) = if m == 0 {
                (S::one(), S::one())
            } else {
                (
                    moment_recurrence_binomial(&p, n, m - 1, x)?,
                    moment_recurrence_videnskii(&p, n, m - 1, x)?,
                )
            };
            let closed = (m <= 2)
                .then(|| moment_closed_form(&p, n, m, x))
                .transpose()?;
            let mut others = vec![&binom, &diff];
            if let Some(c) = &closed {
                others.push(c);
            }
            let ok = agree(&direct, &others);
            Ok((i, m, direct, binom, diff, closed, ok))
        })
        .collect::<Result<Vec<_>>>()?;

    let k = ColumnKind::scalar::<S>();
    let mut table = ResultTable::new(&[
        ("x", k),
        ("m", ColumnKind::Int),
        ("direct", k),
        ("binomial_recurrence", k),
        ("difference_recurrence", k),
        ("closed_form", k),
        ("agrees", ColumnKind::Bool),
    ]);
    let mut passed = true;
    for (i, m, direct, binom, diff, closed, ok) in rows {
        passed &= ok;
        table.push(vec![
            Cell::scalar(&xs[i]),
            Cell::Int(m as i64),
            Cell::scalar(&direct),
            Cell::scalar(&binom),
            Cell::scalar(&diff),
            optional(closed),
            Cell::Bool(ok),
        ]);
    }
    Ok(Outcome { table, passed })
}

fn moments_limit<S: Scalar>(cfg: &RunConfig) -> Result<Outcome> {
    let p = params::<S>(cfg)?;
    let xs = grid::<S>(cfg)?;
    let exact = S::KIND.is_exact();
    let tol = cfg.tail_tol;
    let jobs: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| cfg.orders.iter().map(move |&m| (i, m)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, m)| {
            let x = &xs[i];
            let general = limit_moment_general(&p, m, x)?;
            let (rec, rec_b) = if m == 0 {
                (S::one(), S::one())
            } else {
                (
                    limit_recurrence(&p, m - 1, x)?,
                    limit_recurrence_binomial(&p, m - 1, x)?,
                )
            };
            let closed = (m <= 2)
                .then(|| limit_moment_closed_form(&p, m, x))
                .transpose()?;
            let mut others = vec![&rec, &rec_b];
            if let Some(c) = &closed {
                others.push(c);
            }
            let mut ok = agree(&general, &others);
            let series = if exact {
                None
            } else {
                let s = limit_apply(&p, &SampledFunction::monomial(m as u32), x, tol)?;
                ok &= (s.value.to_f64() - general.to_f64()).abs() <= s.tail_bound;
                Some(s)
            };
            Ok((i, m, general, rec, rec_b, closed, series, ok))
        })
        .collect::<Result<Vec<_>>>()?;

    let k = ColumnKind::scalar::<S>();
    let mut columns = vec![
        ("x", k),
        ("m", ColumnKind::Int),
        ("general", k),
        ("difference_recurrence", k),
        ("binomial_recurrence", k),
        ("closed_form", k),
    ];
    if !exact {
        columns.push(("series", ColumnKind::Float));
        columns.push(("tail_bound", ColumnKind::Float));
    }
    columns.push(("agrees", ColumnKind::Bool));
    let mut table = ResultTable::new(&columns);
    let mut passed = true;
    for (row, (i, m, general, rec, rec_b, closed, series, ok)) in rows.into_iter().enumerate() {
        passed &= ok;
        let mut cells = vec![
            Cell::scalar(&xs[i]),
            Cell::Int(m as i64),
            Cell::scalar(&general),
            Cell::scalar(&rec),
            Cell::scalar(&rec_b),
            optional(closed),
        ];
        if let Some(s) = series {
            cells.push(Cell::Float(s.value.to_f64()));
            cells.push(Cell::Float(s.tail_bound));
            table.certificates.push(Certificate {
                row,
                what: "limit series".into(),
                n_terms: s.terms_used,
                tail_bound: s.tail_bound,
            });
        }
        cells.push(Cell::Bool(ok));
        table.push(cells);
    }
    Ok(Outcome { table, passed })
}

pub(super) fn converge(cfg: &RunConfig) -> Result<Outcome> {
    let p = params::<f64>(cfg)?;
    let f = function::<f64>(cfg)?;
    let xs = grid::<f64>(cfg)?;
    let rows = convergence_experiment(&p, &f, cfg.args.n_max, &xs, cfg.tail_tol)?;
    let mut table = ResultTable::new(&[
        ("n", ColumnKind::Int),
        ("sup_error", ColumnKind::Float),
        ("argmax_x", ColumnKind::Float),
        ("uncertainty", ColumnKind::Float),
        ("analytic_gap", ColumnKind::Float),
    ]);
    for r in rows {
        table.push(vec![
            Cell::Int(r.n as i64),
            Cell::Float(r.sup_error),
            Cell::Float(r.argmax_x),
            Cell::Float(r.uncertainty),
            r.analytic_gap.map_or(Cell::Null, Cell::Float),
        ]);
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}
