use std::ffi::{c_char, CStr, CString};
use std::ptr;

use goldberg_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let st = unsafe { goldberg_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    assert_eq!(st, GoldbergStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn parse(s: &str) -> *mut GoldbergWord {
    let text = CString::new(s).unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { goldberg_word_parse(text.as_ptr(), &mut w) },
        GoldbergStatus::Ok
    );
    w
}

#[test]
fn word_roundtrip() {
    let w = parse("A B");
    let mut t = 0i64;
    assert_eq!(
        unsafe { goldberg_word_trace(w, &mut t) },
        GoldbergStatus::Ok
    );
    assert_eq!(t, -2);

    let mut stats = GoldbergWordStats::default();
    assert_eq!(
        unsafe { goldberg_word_stats(w, &mut stats) },
        GoldbergStatus::Ok
    );
    assert_eq!((stats.length, stats.n0, stats.n1, stats.k), (2, 1, 1, 1));

    let mut needed = 0usize;
    let st = unsafe { goldberg_word_canonical(w, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, GoldbergStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(
        unsafe { goldberg_word_canonical(w, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) },
        GoldbergStatus::Ok
    );
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(s.len() + 1, needed);
    unsafe { goldberg_word_free(w) };
}

#[test]
fn trace_overflow_is_reported() {
    let w = parse("A^2000000000 B^2000000000 A^2000000000 B^2000000000 A^2000000000 B^2000000000");
    let mut t = 0i64;
    let st = unsafe { goldberg_word_trace(w, &mut t) };
    assert_eq!(st, GoldbergStatus::Overflow);
    assert!(last_error().contains("64 bits"));
    unsafe { goldberg_word_free(w) };
}

#[test]
fn parse_errors() {
    let bad = CString::new("A^ C").unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { goldberg_word_parse(bad.as_ptr(), &mut w) },
        GoldbergStatus::Parse
    );
    assert!(w.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { goldberg_word_parse(ptr::null(), &mut w) },
        GoldbergStatus::NullPointer
    );

    let invalid = [0xffu8, 0];
    let st = unsafe { goldberg_word_parse(invalid.as_ptr() as *const c_char, &mut w) };
    assert_eq!(st, GoldbergStatus::InvalidUtf8);
}

#[test]
fn a0_and_mu() {
    let mut a = GoldbergA0::default();
    assert_eq!(
        unsafe { goldberg_a0(2, 1, false, &mut a) },
        GoldbergStatus::Ok
    );
    assert_eq!(a.t_min, 6);
    assert!((a.a0 - 0.003701599).abs() < 1e-8);
    assert_eq!(
        unsafe { goldberg_a0(0, 1, false, &mut a) },
        GoldbergStatus::Domain
    );

    let mut m = GoldbergMu::default();
    assert_eq!(
        unsafe { goldberg_mu(2, 1, 0.0, &mut m) },
        GoldbergStatus::Ok
    );
    assert!((m.mu - 0.0252896).abs() < 1e-6);
    assert_eq!(
        unsafe { goldberg_mu(2, 2, 0.0, &mut m) },
        GoldbergStatus::Domain
    );

    let (mut v, mut e) = (0.0, 0.0);
    let r = 2f64.sqrt() - 1.0;
    assert_eq!(
        unsafe { goldberg_omega0(r, 1e-10, &mut v, &mut e) },
        GoldbergStatus::Ok
    );
    assert!((v - 0.483903).abs() < 1e-5);
    assert_eq!(
        unsafe { goldberg_omega0(r, 1e-10, ptr::null_mut(), &mut e) },
        GoldbergStatus::NullPointer
    );
}

#[test]
fn chocolate_bounds() {
    let mut c = GoldbergChocolate::default();
    assert_eq!(
        unsafe { goldberg_chocolate(0.0, &mut c) },
        GoldbergStatus::Ok
    );
    assert!(c.tstar_lower > c.hempel_smith_tstar);
    assert!((c.hempel_smith_tstar - 0.0132889).abs() < 1e-5);
}

#[test]
fn covering_handle() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { goldberg_covering_new(2, 1, 0.0, &mut h) },
        GoldbergStatus::Ok
    );
    let mut mu = 0.0;
    assert_eq!(
        unsafe { goldberg_covering_mu(h, &mut mu) },
        GoldbergStatus::Ok
    );
    assert!((mu - 0.0252896).abs() < 1e-6);

    let (mut re, mut im, mut p) = (0.0, 0.0, -1);
    assert_eq!(
        unsafe { goldberg_covering_eval(h, -mu, 0.0, &mut re, &mut im, &mut p) },
        GoldbergStatus::Ok
    );
    assert_eq!(p, 1);
    assert!(re.abs() < 1e-6 && im.abs() < 1e-6);

    assert_eq!(
        unsafe { goldberg_covering_eval(h, mu, 0.0, &mut re, &mut im, &mut p) },
        GoldbergStatus::Ok
    );
    assert_eq!(p, 2);
    assert!((re - 1.0).abs() < 1e-6);

    assert_eq!(
        unsafe { goldberg_covering_eval(h, 0.2, 0.3, &mut re, &mut im, ptr::null_mut()) },
        GoldbergStatus::Ok
    );
    assert!(re.is_finite() && im.is_finite());

    assert_eq!(
        unsafe { goldberg_covering_eval(h, 1.5, 0.0, &mut re, &mut im, &mut p) },
        GoldbergStatus::Domain
    );
    unsafe { goldberg_covering_free(h) };
    unsafe { goldberg_covering_free(ptr::null_mut()) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(goldberg_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/goldberg.h"))
            .unwrap();
    for name in [
        "goldberg_word_parse",
        "goldberg_covering_eval",
        "goldberg_mu",
        "GOLDBERG_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
