mod common;

use common::{from_lib, q, to_lib, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;
use qstancu::cli::table::{Cell, ColumnKind, ResultTable};
use qstancu::limitop::{
    limit_apply, limit_basis_values, limit_moment_general, limit_recurrence,
    limit_recurrence_binomial,
};
use qstancu::qcore::{q_binomial, q_binomial_pochhammer, q_pochhammer_infinite};
use qstancu::stancu::{
    apply, apply_with, basis_product_form, basis_recurrence_sides, StancuOptions,
};
use qstancu::{QParams, Rational, SampledFunction};

fn rational_q() -> impl Strategy<Value = Q> {
    (2i64..=16).prop_flat_map(|d| (1..d).prop_map(move |n| q(n, d)))
}

fn rational_alpha() -> impl Strategy<Value = Q> {
    (0i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn rational_x() -> impl Strategy<Value = Q> {
    (1i64..=16).prop_flat_map(|d| (0..=d).prop_map(move |n| q(n, d)))
}

fn params(qq: &Q, alpha: &Q) -> QParams<Rational> {
    QParams::new(to_lib(qq), to_lib(alpha)).unwrap()
}

fn poly() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d)), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_is_a_nonnegative_partition_of_unity(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), n in 1usize..7
    ) {
        let b = basis_product_form(&params(&qq, &alpha), n, &to_lib(&x)).unwrap();
        prop_assert_eq!(from_lib(&b.sum()), Q::one());
        prop_assert!(b.values.iter().all(|v| from_lib(v) >= Q::zero()));
    }

    #[test]
    fn linear_functions_are_reproduced(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), n in 1usize..7,
        c0 in -5i64..5, c1 in -5i64..5
    ) {
        let f = SampledFunction::Polynomial(vec![to_lib(&q(c0, 1)), to_lib(&q(c1, 1))]);
        let got = from_lib(&apply(&params(&qq, &alpha), n, &f, &to_lib(&x)).unwrap());
        prop_assert_eq!(got, q(c0, 1) + q(c1, 1) * x);
    }

    #[test]
    fn operator_is_linear(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), n in 1usize..6,
        f in poly(), g in poly(), a in -4i64..4, b in -4i64..4
    ) {
        let p = params(&qq, &alpha);
        let lx = to_lib(&x);
        let lib = |c: &[Q]| SampledFunction::Polynomial(c.iter().map(to_lib).collect());
        let len = f.len().max(g.len());
        let combo: Vec<Q> = (0..len)
            .map(|i| {
                q(a, 1) * f.get(i).cloned().unwrap_or_else(Q::zero)
                    + q(b, 1) * g.get(i).cloned().unwrap_or_else(Q::zero)
            })
            .collect();
        let lhs = from_lib(&apply(&p, n, &lib(&combo), &lx).unwrap());
        let rhs = q(a, 1) * from_lib(&apply(&p, n, &lib(&f), &lx).unwrap())
            + q(b, 1) * from_lib(&apply(&p, n, &lib(&g), &lx).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_operator_matches_definition(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), n in 1usize..6, f in poly()
    ) {
        let lib_f = SampledFunction::Polynomial(f.iter().map(to_lib).collect());
        let got = from_lib(&apply(&params(&qq, &alpha), n, &lib_f, &to_lib(&x)).unwrap());
        let want = common::apply(n, &qq, &alpha, &x, |t| {
            f.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
        });
        prop_assert_eq!(got, want);
    }

    #[test]
    fn basis_identity_holds_for_all_k(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), n in 1usize..7
    ) {
        let p = params(&qq, &alpha);
        for k in 0..=n {
            let (lhs, rhs) = basis_recurrence_sides(&p, n, k, &to_lib(&x)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gaussian_binomial_routes_agree(qq in rational_q(), n in 0usize..12, k in 0usize..12) {
        prop_assume!(k <= n);
        let lq = to_lib(&qq);
        let a = q_binomial(n, k, &lq).unwrap();
        let b = q_binomial_pochhammer(n, k, &lq).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(from_lib(&a), common::qbinom(n, k, &qq));
        prop_assert_eq!(a, q_binomial(n, n - k, &lq).unwrap());
    }

    #[test]
    fn limit_moment_formula_and_recurrences_agree(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), m in 0usize..6
    ) {
        let p = params(&qq, &alpha);
        let lx = to_lib(&x);
        let general = limit_moment_general(&p, m + 1, &lx).unwrap();
        prop_assert_eq!(from_lib(&general), common::limit_moment(m + 1, &qq, &alpha, &x));
        prop_assert_eq!(&limit_recurrence(&p, m, &lx).unwrap(), &general);
        prop_assert_eq!(&limit_recurrence_binomial(&p, m, &lx).unwrap(), &general);
    }

    #[test]
    fn limit_series_matches_moment_formula(
        qf in 0.1f64..0.9, alpha in 0.0f64..3.0, x in 0.0f64..0.95, m in 0u32..7
    ) {
        let p = QParams::new(qf, alpha).unwrap();
        let s = limit_apply(&p, &SampledFunction::monomial(m), &x, 1e-10).unwrap();
        let g = limit_moment_general(&p, m as usize, &x).unwrap();
        // The float evaluation of the finite formula carries its own rounding.
        prop_assert!((s.value - g).abs() <= s.tail_bound + 64.0 * f64::EPSILON, "{s:?} vs {g}");
        prop_assert!(s.tail_bound <= 1e-10);
    }

    #[test]
    fn limit_operator_is_monotone(
        qf in 0.1f64..0.9, alpha in 0.0f64..3.0, x in 0.0f64..0.95, m in 1u32..6
    ) {
        // t^m <= t^{m-1} on [0, 1]
        let p = QParams::new(qf, alpha).unwrap();
        let hi = limit_apply(&p, &SampledFunction::monomial(m - 1), &x, 1e-10).unwrap();
        let lo = limit_apply(&p, &SampledFunction::monomial(m), &x, 1e-10).unwrap();
        prop_assert!(lo.value <= hi.value + lo.tail_bound + hi.tail_bound);
    }

    #[test]
    fn limit_basis_partial_sums_rise_towards_one(
        qf in 0.1f64..0.9, alpha in 0.0f64..3.0, j in 0u32..8
    ) {
        let x = j as f64 / 8.0;
        let p = QParams::new(qf, alpha).unwrap();
        let vals = limit_basis_values(&p, 40, &x, 1e-12).unwrap();
        let mut partial = 0.0;
        let mut certs = 0.0;
        for v in &vals {
            prop_assert!(v.value >= 0.0);
            partial += v.value;
            certs += v.certificate.tail_bound;
            prop_assert!(partial <= 1.0 + certs + 1e-14);
        }
    }

    #[test]
    fn infinite_product_bound_is_sound(a in 0.0f64..1.0, qf in 0.05f64..0.95, e in 4i32..14) {
        let tol = 10f64.powi(-e);
        let (v, cert) = q_pochhammer_infinite(&a, &qf, tol).unwrap();
        let deep = (0..cert.n_terms + 400).fold(1.0f64, |acc, j| acc * (1.0 - a * qf.powi(j as i32)));
        prop_assert!((v - deep).abs() <= cert.tail_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn second_moment_closed_form_holds_up_to_degree_64(
        qq in rational_q(), alpha in rational_alpha(), x in rational_x(), n in 1usize..=64
    ) {
        // Lift the default exact-mode degree cap.
        let opts = StancuOptions { exact_degree_cap: 64, ..StancuOptions::default() };
        let p = params(&qq, &alpha);
        let got = from_lib(&apply_with(&p, n, &SampledFunction::monomial(2), &to_lib(&x), &opts).unwrap());
        let one = Q::one();
        let want = (x.clone() * (x.clone() + alpha.clone())
            + x.clone() * (one.clone() - x.clone()) / common::qint(n, &qq))
            / (one + alpha);
        prop_assert_eq!(got, want);
    }
}

proptest! {
    #[test]
    fn table_json_round_trips(
        floats in prop::collection::vec(any::<f64>(), 1..8),
        ints in prop::collection::vec(any::<i64>(), 1..8),
        num in -1000i64..1000, den in 1i64..1000
    ) {
        let mut t = ResultTable::new(&[
            ("x", ColumnKind::Float),
            ("k", ColumnKind::Int),
            ("exact", ColumnKind::Exact),
            ("ok", ColumnKind::Bool),
            ("note", ColumnKind::Text),
        ]);
        t.config.push(("q".into(), "1/2".into()));
        for (i, (f, k)) in floats.iter().zip(&ints).enumerate() {
            t.push(vec![
                Cell::Float(*f),
                Cell::Int(*k),
                Cell::scalar(&to_lib(&q(num, den))),
                Cell::Bool(i % 2 == 0),
                if i % 3 == 0 { Cell::Null } else { Cell::Text(format!("row {i}")) },
            ]);
        }
        let back = ResultTable::from_json_str(&t.to_json_string()).unwrap();
        prop_assert_eq!(back.rows, t.rows);
        prop_assert_eq!(back.config, t.config);
    }
}

#[test]
fn limit_operator_tends_to_endpoint_value() {
    let p = QParams::new(0.5f64, 0.25).unwrap();
    for spec in ["e2", "exp", "absshift:0.3"] {
        let f: SampledFunction<f64> = spec.parse().unwrap();
        let f1 = f.eval(&1.0).unwrap();
        let mut previous = f64::INFINITY;
        for j in 1..=20 {
            let x = 1.0 - 0.5f64.powi(j);
            let s = limit_apply(&p, &f, &x, 1e-10).unwrap();
            let err = (s.value - f1).abs();
            // Lipschitz-type decay in 1 - x for these smooth-enough functions.
            assert!(
                err <= 8.0 * 0.5f64.powi(j) + s.tail_bound,
                "{spec} j={j}: {err:e}"
            );
            assert!(err <= previous + s.tail_bound, "{spec} j={j}");
            previous = err;
        }
    }
}
