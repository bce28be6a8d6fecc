//! C interface to the cube kernel.
//!
//! Every function returns a [`CubeStatus`]. On failure a message is kept
//! per thread and can be read with [`cube_last_error`]. Handles are opaque
//! and must be released with their `_free` function; strings returned
//! through `out` pointers are released with [`cube_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cube_core::error::KernelError;
use cube_core::eta_long::{eta_long, plus_translate};
use cube_core::marked::star_translate;
use cube_core::order::measure_unmarked;
use cube_core::reduce::{normalize, DEFAULT_FUEL};
use cube_core::syntax::{parse_context, parse_term, print_marked, print_term, ParseError};
use cube_core::term::{Context, Term};
use cube_core::typing::{named_system, Checker, SystemSpec, TypeError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeStatus {
    Ok = 0,
    ParseError = 1,
    TypeError = 2,
    FuelExhausted = 3,
    InvalidArgument = 4,
    Precondition = 5,
    Internal = 6,
}

/// A system, a fuel budget and a context.
pub struct CubeSession {
    system: SystemSpec,
    fuel: u64,
    ctx: Context,
}

/// A term scoped over the context of the session that produced it.
pub struct CubeTerm {
    ctx: Context,
    term: Term,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CubeStatus, String);

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure(CubeStatus::ParseError, e.to_string())
    }
}

impl From<TypeError> for Failure {
    fn from(e: TypeError) -> Self {
        let status = if e.is_fuel() {
            CubeStatus::FuelExhausted
        } else {
            CubeStatus::TypeError
        };
        Failure(status, e.to_string())
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::Type(t) => t.into(),
            KernelError::Precondition(m) => Failure(CubeStatus::Precondition, m),
            KernelError::Violation(m) => Failure(CubeStatus::Internal, m),
        }
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(CubeStatus::InvalidArgument, msg.to_string())
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording its error and catching panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CubeStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CubeStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CubeStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn session<'a>(p: *const CubeSession) -> Result<&'a CubeSession, Failure> {
    p.as_ref().ok_or_else(|| invalid("null session"))
}

unsafe fn term<'a>(p: *const CubeTerm) -> Result<&'a CubeTerm, Failure> {
    p.as_ref().ok_or_else(|| invalid("null term"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_term(out: *mut *mut CubeTerm, ctx: &Context, t: Term) -> Result<(), Failure> {
    let h = Box::into_raw(Box::new(CubeTerm {
        ctx: ctx.clone(),
        term: t,
    }));
    put(out, h).inspect_err(|_| drop(Box::from_raw(h)))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| invalid("string contains NUL"))?;
    let raw = c.into_raw();
    put(out, raw).inspect_err(|_| drop(CString::from_raw(raw)))
}

/// The kernel checks every input term against the session context.
fn same_scope(s: &CubeSession, t: &CubeTerm) -> Result<(), Failure> {
    if s.ctx != t.ctx {
        return Err(invalid("term belongs to a different context"));
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call.
#[no_mangle]
pub extern "C" fn cube_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Opens a session for a named system or rule list (`cc`, `PP,TP`, ...).
/// A `fuel` of 0 selects the default budget.
///
/// # Safety
/// `system` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_session_new(
    system: *const c_char,
    fuel: u64,
    out: *mut *mut CubeSession,
) -> CubeStatus {
    guard(|| {
        let name = text(system)?;
        let system = named_system(name).map_err(|e| invalid(&e.to_string()))?;
        let fuel = if fuel == 0 { DEFAULT_FUEL } else { fuel };
        let s = Box::into_raw(Box::new(CubeSession {
            system,
            fuel,
            ctx: Context::new(),
        }));
        put(out, s).inspect_err(|_| drop(Box::from_raw(s)))
    })
}

/// # Safety
/// `s` must come from `cube_session_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cube_session_free(s: *mut CubeSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Replaces the session context; it must be well formed in the system.
///
/// # Safety
/// `s` must be a live session and `src` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cube_session_set_context(
    s: *mut CubeSession,
    src: *const c_char,
) -> CubeStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| invalid("null session"))?;
        let ctx = parse_context(text(src)?)?;
        Checker::new(s.system, s.fuel).wf_context(&ctx)?;
        s.ctx = ctx;
        Ok(())
    })
}

/// # Safety
/// `s` must be a live session, `src` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_term_parse(
    s: *const CubeSession,
    src: *const c_char,
    out: *mut *mut CubeTerm,
) -> CubeStatus {
    guard(|| {
        let s = session(s)?;
        let t = parse_term(text(src)?, &s.ctx)?;
        put_term(out, &s.ctx, t)
    })
}

/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cube_term_free(t: *mut CubeTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Renders a term in concrete syntax.
///
/// # Safety
/// `t` must be a live term and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_term_print(t: *const CubeTerm, out: *mut *mut c_char) -> CubeStatus {
    guard(|| {
        let t = term(t)?;
        put_string(out, print_term(&t.term, &t.ctx))
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cube_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Infers the type of a term.
///
/// # Safety
/// Pointers must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_infer(
    s: *const CubeSession,
    t: *const CubeTerm,
    out: *mut *mut CubeTerm,
) -> CubeStatus {
    guard(|| {
        let (s, t) = (session(s)?, term(t)?);
        same_scope(s, t)?;
        let ty = Checker::new(s.system, s.fuel).infer(&s.ctx, &t.term)?;
        put_term(out, &s.ctx, ty)
    })
}

/// Beta-eta normal form; does not type check.
///
/// # Safety
/// Pointers must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_normalize(
    s: *const CubeSession,
    t: *const CubeTerm,
    out: *mut *mut CubeTerm,
) -> CubeStatus {
    guard(|| {
        let (s, t) = (session(s)?, term(t)?);
        same_scope(s, t)?;
        let n = normalize(&t.term, s.fuel)
            .map_err(|_| Failure(CubeStatus::FuelExhausted, "fuel exhausted".into()))?;
        put_term(out, &s.ctx, n)
    })
}

fn normal_checked(s: &CubeSession, t: &CubeTerm) -> Result<Term, Failure> {
    Checker::new(s.system, s.fuel).infer(&s.ctx, &t.term)?;
    normalize(&t.term, s.fuel)
        .map_err(|_| Failure(CubeStatus::FuelExhausted, "fuel exhausted".into()))
}

/// Eta-long form of the normal form of a well-typed term.
///
/// # Safety
/// Pointers must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_eta_long(
    s: *const CubeSession,
    t: *const CubeTerm,
    out: *mut *mut CubeTerm,
) -> CubeStatus {
    guard(|| {
        let (s, t) = (session(s)?, term(t)?);
        same_scope(s, t)?;
        let n = normal_checked(s, t)?;
        let e = eta_long(&s.ctx, &n, s.system, s.fuel)?;
        put_term(out, &s.ctx, e)
    })
}

/// Measure of the normal form of a well-typed term.
///
/// # Safety
/// Pointers must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_measure(
    s: *const CubeSession,
    t: *const CubeTerm,
    out: *mut u64,
) -> CubeStatus {
    guard(|| {
        let (s, t) = (session(s)?, term(t)?);
        same_scope(s, t)?;
        let n = normal_checked(s, t)?;
        put(out, measure_unmarked(&s.ctx, &n, s.system, s.fuel)?)
    })
}

/// Marked translation as text: t*, or its eta-long form when `plus` is
/// nonzero.
///
/// # Safety
/// Pointers must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_mark(
    s: *const CubeSession,
    t: *const CubeTerm,
    plus: bool,
    out: *mut *mut c_char,
) -> CubeStatus {
    guard(|| {
        let (s, t) = (session(s)?, term(t)?);
        same_scope(s, t)?;
        let (mctx, a) = if plus {
            plus_translate(&s.ctx, &t.term, s.system, s.fuel)?
        } else {
            let (mctx, a, _) = star_translate(&s.ctx, &t.term, s.system, s.fuel)?;
            (mctx, a)
        };
        put_string(out, print_marked(&a, &mctx))
    })
}

/// Whether the two terms are beta-eta convertible.
///
/// # Safety
/// Pointers must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cube_convertible(
    s: *const CubeSession,
    a: *const CubeTerm,
    b: *const CubeTerm,
    out: *mut bool,
) -> CubeStatus {
    guard(|| {
        let (s, a, b) = (session(s)?, term(a)?, term(b)?);
        same_scope(s, a)?;
        same_scope(s, b)?;
        let r = Checker::new(s.system, s.fuel).convertible(&a.term, &b.term)?;
        put(out, r)
    })
}
