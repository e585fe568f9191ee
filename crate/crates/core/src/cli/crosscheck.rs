use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::table::{Cell, ColumnKind, ResultTable};
use super::{Outcome, RunConfig, Suite};
use crate::error::Result;
use crate::function::SampledFunction;
use crate::numerics::{rational_of, Rational, Scalar, Tolerance};
use crate::qcore::{
    pochhammer_infinite_f64, product_identity_sides, q_binomial_row, q_binomial_theorem_series,
    q_pochhammer_raw, ratio_error_bound, QParams, UNIT_ROUNDOFF,
};
use crate::stancu::qbernstein::{q_bernstein_apply, q_bernstein_basis};
use crate::stancu::{
    apply, basis_pochhammer_form, basis_product_form, basis_recurrence_check, moment_closed_form,
    moment_recurrence_binomial, moment_recurrence_videnskii,
};

const Q_SWEEP: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];
const ALPHA_SWEEP: [(i64, i64); 4] = [(0, 1), (1, 4), (1, 1), (3, 1)];
const MAX_DEGREE: usize = 8;
const X_STEPS: i64 = 8;
const PRODUCT_IDENTITY_TUPLES: usize = 200;
const Q_BINOMIAL_TUPLES: usize = 50;

/// Per-check tallies of one suite.
type Checks = Vec<(String, Tally)>;

#[derive(Default, Clone, Copy)]
struct Tally {
    passed: i64,
    failed: i64,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            passed: self.passed + o.passed,
            failed: self.failed + o.failed,
        }
    }
}

fn scalar<S: Scalar>(n: i64, d: i64) -> S {
    S::from_ratio(n, d)
}

/// Every `(params, n, x)` of the rational sweep.
fn sweep<S: Scalar>(alpha_zero_only: bool) -> Vec<(QParams<S>, usize, S)> {
    let mut out = Vec::new();
    for &(qn, qd) in &Q_SWEEP {
        for &(an, ad) in &ALPHA_SWEEP {
            if alpha_zero_only && an != 0 {
                continue;
            }
            let p = QParams::new(scalar::<S>(qn, qd), scalar::<S>(an, ad)).expect("valid sweep");
            for n in 1..=MAX_DEGREE {
                for j in 0..=X_STEPS {
                    out.push((p.clone(), n, scalar::<S>(j, X_STEPS)));
                }
            }
        }
    }
    out
}

/// Runs `check` over the sweep in parallel, tallying each named check.
fn tally_sweep<S, F>(names: &[&str], alpha_zero_only: bool, check: F) -> Result<Checks>
where
    S: Scalar,
    F: Fn(&QParams<S>, usize, &S, &mut [Tally]) -> Result<()> + Sync,
{
    let k = names.len();
    let totals = sweep::<S>(alpha_zero_only)
        .par_iter()
        .map(|(p, n, x)| {
            let mut t = vec![Tally::default(); k];
            check(p, *n, x, &mut t)?;
            Ok::<_, crate::error::Error>(t)
        })
        .try_reduce(
            || vec![Tally::default(); k],
            |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()),
        )?;
    Ok(names.iter().map(|s| s.to_string()).zip(totals).collect())
}

fn same<S: Scalar>(a: &S, b: &S) -> bool {
    a.approx_eq(b, &Tolerance::FINITE)
}

fn basis_suite<S: Scalar>() -> Result<Checks> {
    tally_sweep::<S, _>(
        &["product_vs_pochhammer", "degenerate_point_delta"],
        false,
        |p, n, x, t| {
            let product = basis_product_form(p, n, x)?;
            if (x.clone() + p.gamma()).is_zero() {
                let ok = product
                    .values
                    .iter()
                    .enumerate()
                    .all(|(k, v)| *v == if k == 0 { S::one() } else { S::zero() });
                t[1].record(ok);
            } else {
                let poch = basis_pochhammer_form(p, n, x)?;
                let ok = product
                    .values
                    .iter()
                    .zip(&poch.values)
                    .all(|(a, b)| same(a, b));
                t[0].record(ok);
            }
            Ok(())
        },
    )
}

fn basrec_suite<S: Scalar>() -> Result<Checks> {
    tally_sweep::<S, _>(
        &["basis_recurrence_k_lt_n", "basis_recurrence_k_eq_n"],
        false,
        |p, n, x, t| {
            for k in 0..=n {
                t[usize::from(k == n)].record(basis_recurrence_check(p, n, k, x)?);
            }
            Ok(())
        },
    )
}

fn moments_suite<S: Scalar>() -> Result<Checks> {
    tally_sweep::<S, _>(
        &[
            "binomial_recurrence",
            "difference_recurrence",
            "closed_form",
        ],
        false,
        |p, n, x, t| {
            for m in 0..=4usize {
                let direct = apply(p, n, &SampledFunction::monomial(m as u32 + 1), x)?;
                t[0].record(same(&moment_recurrence_binomial(p, n, m, x)?, &direct));
                t[1].record(same(&moment_recurrence_videnskii(p, n, m, x)?, &direct));
            }
            for m in 0..=2usize {
                let direct = apply(p, n, &SampledFunction::monomial(m as u32), x)?;
                t[2].record(same(&moment_closed_form(p, n, m, x)?, &direct));
            }
            Ok(())
        },
    )
}

fn bernstein_suite<S: Scalar>() -> Result<Checks> {
    let poly = SampledFunction::Polynomial(vec![scalar::<S>(1, 3), scalar(-2, 1), scalar(5, 7)]);
    tally_sweep::<S, _>(&["basis", "operator"], true, |p, n, x, t| {
        let ours = basis_product_form(p, n, x)?;
        let reference = q_bernstein_basis(p.q(), n, x)?;
        t[0].record(ours.values.iter().zip(&reference).all(|(a, b)| same(a, b)));
        let fs = (0..=4).map(SampledFunction::monomial).chain([poly.clone()]);
        for f in fs {
            t[1].record(same(
                &apply(p, n, &f, x)?,
                &q_bernstein_apply(p.q(), n, &f, x)?,
            ));
        }
        Ok(())
    })
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=12);
    let n = rng.gen_range(lo * d..=hi * d);
    rational_of(n, d).expect("nonzero denominator")
}

fn identities_suite<S: Scalar>(seed: u64) -> Result<Checks> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut product = Tally::default();
    for _ in 0..PRODUCT_IDENTITY_TUPLES {
        let a = random_rational(&mut rng, -2, 2);
        let b = random_rational(&mut rng, -2, 2);
        let d = rng.gen_range(2..=12);
        let q = rational_of(rng.gen_range(1..d), d).expect("nonzero denominator");
        let n = rng.gen_range(0..=10);
        let conv = |r: &Rational| S::parse_scalar(&r.to_string());
        let (a, b, q) = (conv(&a)?, conv(&b)?, conv(&q)?);
        let (lhs, rhs) = product_identity_sides(&a, &b, &q, n)?;
        let ok = if S::KIND.is_exact() {
            lhs == rhs
        } else {
            // The right side cancels heavily for negative arguments; compare
            // against the size of its terms rather than of the result.
            let scale = product_identity_term_mass(a.to_f64(), b.to_f64(), q.to_f64(), n);
            (lhs.to_f64() - rhs.to_f64()).abs() <= Tolerance::FINITE.relative * scale.max(1.0)
        };
        product.record(ok);
    }

    let mut series = Tally::default();
    for _ in 0..Q_BINOMIAL_TUPLES {
        let q: f64 = rng.gen_range(0.05..=0.95);
        let x: f64 = rng.gen_range(0.0..=0.9);
        let a: f64 = rng.gen_range(0.0..=1.0);
        series.record(q_binomial_theorem_agrees(a, x, q)?);
    }
    Ok(vec![
        ("product_identity".into(), product),
        ("q_binomial_theorem".into(), series),
    ])
}

/// `sum_k |[n k]_q b^k (a;q)_k (b;q)_{n-k}|`.
fn product_identity_term_mass(a: f64, b: f64, q: f64, n: usize) -> f64 {
    q_binomial_row(n, &q)
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            (c * b.powi(k as i32) * q_pochhammer_raw(&a, &q, k) * q_pochhammer_raw(&b, &q, n - k))
                .abs()
        })
        .sum()
}

/// `sum_k (a;q)_k/(q;q)_k x^k` against `(ax;q)_inf / (x;q)_inf` within the
/// combined certificates.
fn q_binomial_theorem_agrees(a: f64, x: f64, q: f64) -> Result<bool> {
    let (lhs, cert) = q_binomial_theorem_series(&a, &x, &q, 1e-12)?;
    let (num, cn) = pochhammer_infinite_f64(a * x, q, 1e-13);
    let (den, cd) = pochhammer_infinite_f64(x, q, 1e-13);
    let rhs = num / den;
    let err = ratio_error_bound(num, cn.tail_bound + UNIT_ROUNDOFF * num, den, cd.tail_bound)
        + 2.0 * UNIT_ROUNDOFF * rhs.abs();
    Ok((lhs - rhs).abs() <= cert.tail_bound + err)
}

fn suites<S: Scalar>(cfg: &RunConfig) -> Result<Vec<(&'static str, Checks)>> {
    let want = |s: Suite| cfg.args.suite == s || cfg.args.suite == Suite::All;
    let mut out = Vec::new();
    if want(Suite::Basis) {
        out.push(("basis", basis_suite::<S>()?));
    }
    if want(Suite::Identities) {
        out.push(("identities", identities_suite::<S>(cfg.args.seed)?));
    }
    if want(Suite::Basrec) {
        out.push(("basrec", basrec_suite::<S>()?));
    }
    if want(Suite::Moments) {
        out.push(("moments", moments_suite::<S>()?));
    }
    if want(Suite::Bernstein) {
        out.push(("bernstein", bernstein_suite::<S>()?));
    }
    Ok(out)
}

pub(super) fn run(cfg: &RunConfig) -> Result<Outcome> {
    let results = if cfg.kind.is_exact() {
        suites::<Rational>(cfg)?
    } else {
        suites::<f64>(cfg)?
    };
    let mut table = ResultTable::new(&[
        ("suite", ColumnKind::Text),
        ("check", ColumnKind::Text),
        ("passed", ColumnKind::Int),
        ("failed", ColumnKind::Int),
        ("total", ColumnKind::Int),
    ]);
    let mut ok = true;
    for (suite, checks) in results {
        for (name, t) in checks {
            ok &= t.failed == 0;
            table.push(vec![
                Cell::Text(suite.into()),
                Cell::Text(name),
                Cell::Int(t.passed),
                Cell::Int(t.failed),
                Cell::Int(t.passed + t.failed),
            ]);
        }
    }
    Ok(Outcome { table, passed: ok })
}
