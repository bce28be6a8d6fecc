use std::ffi::{CStr, CString};
use std::ptr;

use cube_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

struct Session(*mut CubeSession);

impl Session {
    fn new(system: &str, ctx: &str) -> Session {
        let mut s = ptr::null_mut();
        unsafe {
            assert_eq!(
                cube_session_new(c(system).as_ptr(), 0, &mut s),
                CubeStatus::Ok
            );
            assert_eq!(cube_session_set_context(s, c(ctx).as_ptr()), CubeStatus::Ok);
        }
        Session(s)
    }

    fn parse(&self, src: &str) -> *mut CubeTerm {
        let mut t = ptr::null_mut();
        let st = unsafe { cube_term_parse(self.0, c(src).as_ptr(), &mut t) };
        assert_eq!(st, CubeStatus::Ok, "{}", last_error());
        t
    }
}

impl Drop for Session {
    fn drop(&mut self) {
        unsafe { cube_session_free(self.0) }
    }
}

fn last_error() -> String {
    let p = cube_last_error();
    if p.is_null() {
        return String::new();
    }
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn show(t: *const CubeTerm) -> String {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(cube_term_print(t, &mut p), CubeStatus::Ok);
        let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
        cube_string_free(p);
        s
    }
}

const G0: &str = "P : Prop; f : P -> P; a : P";

#[test]
fn infer_normalize_and_eta_long() {
    let s = Session::new("stlc", G0);
    let fa = s.parse("([x:P] (f x)) a");
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(cube_infer(s.0, fa, &mut out), CubeStatus::Ok);
        assert_eq!(show(out), "P");
        cube_term_free(out);
        assert_eq!(cube_normalize(s.0, fa, &mut out), CubeStatus::Ok);
        assert_eq!(show(out), "(f a)");
        cube_term_free(out);
        let f = s.parse("f");
        assert_eq!(cube_eta_long(s.0, f, &mut out), CubeStatus::Ok);
        assert_eq!(show(out), "[y:P] (f y)");
        cube_term_free(out);
        let mut m = 0;
        assert_eq!(cube_measure(s.0, f, &mut m), CubeStatus::Ok);
        assert_eq!(m, 5);
        let mut text = ptr::null_mut();
        assert_eq!(cube_mark(s.0, f, true, &mut text), CubeStatus::Ok);
        assert_eq!(
            CStr::from_ptr(text).to_str().unwrap(),
            "([y:P^(Prop)] (f^(P^(Prop) -> P^(Prop)) y^(P^(Prop)))^(P^(Prop)))^(P^(Prop) -> P^(Prop))"
        );
        cube_string_free(text);
        let mut same = false;
        let ef = s.parse("[y:P] (f y)");
        assert_eq!(cube_convertible(s.0, f, ef, &mut same), CubeStatus::Ok);
        assert!(same);
        cube_term_free(ef);
        cube_term_free(f);
        cube_term_free(fa);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let s = Session::new("stlc", "");
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            cube_term_parse(s.0, c("(x").as_ptr(), &mut t),
            CubeStatus::ParseError
        );
        assert!(!last_error().is_empty());
        let id = s.parse("[A:Prop][x:A]x");
        let mut out = ptr::null_mut();
        assert_eq!(cube_infer(s.0, id, &mut out), CubeStatus::TypeError);
        assert!(last_error().contains("RuleNotInSystem"), "{}", last_error());
        assert!(out.is_null());
        cube_term_free(id);
        assert_eq!(
            cube_infer(s.0, ptr::null(), &mut out),
            CubeStatus::InvalidArgument
        );
        let mut bad = ptr::null_mut();
        assert_eq!(
            cube_session_new(c("lambda-q").as_ptr(), 0, &mut bad),
            CubeStatus::InvalidArgument
        );
        assert_eq!(
            cube_session_set_context(s.0, c("x : Type").as_ptr()),
            CubeStatus::TypeError
        );
        let p = s.parse("Prop");
        let mut m = 0;
        assert_eq!(cube_measure(s.0, p, &mut m), CubeStatus::Ok);
        assert!(cube_last_error().is_null());
        cube_term_free(p);
    }
}

#[test]
fn fuel_is_reported() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            cube_session_new(c("cc").as_ptr(), 20, &mut s),
            CubeStatus::Ok
        );
        let s = Session(s);
        let omega = s.parse("([x:Prop -> Prop] (x x)) ([x:Prop -> Prop] (x x))");
        let mut out = ptr::null_mut();
        assert_eq!(
            cube_normalize(s.0, omega, &mut out),
            CubeStatus::FuelExhausted
        );
        cube_term_free(omega);
    }
}

#[test]
fn terms_are_tied_to_their_context() {
    let a = Session::new("cc", G0);
    let b = Session::new("cc", "Q : Prop");
    let t = a.parse("a");
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(cube_infer(b.0, t, &mut out), CubeStatus::InvalidArgument);
        cube_term_free(t);
    }
}
