use std::ffi::{CStr, CString};
use std::ptr;

use qstancu_ffi::*;

fn params(q: f64, alpha: f64) -> *mut QstancuParams {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { qstancu_params_new(q, alpha, &mut p) },
        QstancuStatus::Ok
    );
    p
}

fn function(spec: &str) -> *mut QstancuFunction {
    let spec = CString::new(spec).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { qstancu_function_parse(spec.as_ptr(), &mut f) },
        QstancuStatus::Ok
    );
    f
}

fn last_error() -> String {
    let p = qstancu_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn basis_sums_to_one_and_buffer_is_checked() {
    let p = params(0.5, 0.25);
    let mut buf = [0.0f64; 6];
    let st = unsafe { qstancu_basis(p, 5, 0.3, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(st, QstancuStatus::Ok);
    assert!((buf.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    assert!(buf.iter().all(|v| *v >= 0.0));

    let st = unsafe { qstancu_basis(p, 6, 0.3, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(st, QstancuStatus::BufferTooSmall);
    assert!(last_error().contains("need 7"));
    unsafe { qstancu_params_free(p) };
}

#[test]
fn apply_and_closed_form_agree() {
    let p = params(0.5, 0.25);
    let f = function("e2");
    let (mut a, mut c) = (0.0, 0.0);
    unsafe {
        assert_eq!(qstancu_apply(p, 3, f, 0.5, &mut a), QstancuStatus::Ok);
        assert_eq!(
            qstancu_moment_closed_form(p, 3, 2, 0.5, &mut c),
            QstancuStatus::Ok
        );
        assert_eq!(
            qstancu_moment_closed_form(p, 3, 3, 0.5, &mut c),
            QstancuStatus::Unsupported
        );
        qstancu_function_free(f);
        qstancu_params_free(p);
    }
    assert!((a - 29.0 / 70.0).abs() < 1e-15);
}

#[test]
fn limit_operator_and_infinite_product() {
    let p = params(0.5, 0.25);
    let f = function("e2");
    let (mut v, mut tb, mut m) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(
            qstancu_limit_apply(p, f, 0.5, 1e-10, &mut v, &mut tb),
            QstancuStatus::Ok
        );
        assert_eq!(qstancu_limit_moment(p, 2, 0.5, &mut m), QstancuStatus::Ok);
    }
    assert!((m - 0.4).abs() < 1e-15);
    assert!((v - m).abs() <= tb && tb <= 1e-10);

    let (mut pv, mut pb) = (0.0, 0.0);
    let st = unsafe { qstancu_q_pochhammer_infinite(0.5, 0.5, 1e-12, &mut pv, &mut pb) };
    assert_eq!(st, QstancuStatus::Ok);
    assert!((pv - 0.288_788_095_086_602_4).abs() <= pb + 1e-16);
    let st = unsafe { qstancu_q_pochhammer_infinite(-0.5, 0.5, 1e-12, &mut pv, &mut pb) };
    assert_eq!(st, QstancuStatus::InvalidArgument);
    unsafe {
        qstancu_function_free(f);
        qstancu_params_free(p);
    }
}

#[test]
fn exact_string_evaluation() {
    let s = |v: &str| CString::new(v).unwrap();
    let (q, a, f, x) = (s("1/2"), s("1/4"), s("e2"), s("1/2"));
    let mut out = ptr::null_mut();
    let st =
        unsafe { qstancu_apply_exact(q.as_ptr(), a.as_ptr(), 3, f.as_ptr(), x.as_ptr(), &mut out) };
    assert_eq!(st, QstancuStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), "29/70");
    unsafe { qstancu_string_free(out) };

    let exp = s("exp");
    let st = unsafe {
        qstancu_apply_exact(
            q.as_ptr(),
            a.as_ptr(),
            3,
            exp.as_ptr(),
            x.as_ptr(),
            &mut out,
        )
    };
    assert_eq!(st, QstancuStatus::Unsupported);
    assert!(last_error().contains("exact"));
}

#[test]
fn argument_errors() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { qstancu_params_new(1.5, 0.0, &mut p) },
        QstancuStatus::InvalidArgument
    );
    assert!(last_error().contains("q must satisfy"));
    assert_eq!(
        unsafe { qstancu_params_new(0.5, 0.0, ptr::null_mut()) },
        QstancuStatus::NullPointer
    );

    let bad = CString::new("bogus").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { qstancu_function_parse(bad.as_ptr(), &mut f) },
        QstancuStatus::ParseError
    );

    let mut v = 0.0;
    let st = unsafe { qstancu_apply(ptr::null(), 3, ptr::null(), 0.5, &mut v) };
    assert_eq!(st, QstancuStatus::NullPointer);

    let p = params(0.5, 0.0);
    let f = function("e1");
    let st = unsafe { qstancu_apply(p, 3, f, 1.5, &mut v) };
    assert_eq!(st, QstancuStatus::InvalidArgument);
    // Success clears the message.
    assert_eq!(
        unsafe { qstancu_apply(p, 3, f, 0.5, &mut v) },
        QstancuStatus::Ok
    );
    assert!(qstancu_last_error_message().is_null());
    unsafe {
        qstancu_function_free(f);
        qstancu_params_free(p);
        qstancu_params_free(ptr::null_mut());
    }
}
