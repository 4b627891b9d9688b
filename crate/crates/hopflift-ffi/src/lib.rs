//! C ABI for the hopflift library.
//!
//! Conventions:
//! - expressions and fields are opaque handles created by `hl_*_parse` and
//!   released by the matching `hl_*_free`;
//! - every fallible call returns an [`HlStatus`]; on failure the message is
//!   available from [`hl_last_error_message`] (thread-local);
//! - structured results (iteration traces, verification reports) come back
//!   as JSON strings in the library's documented schemas, released with
//!   [`hl_string_free`];
//! - run configuration is passed as a JSON object mirroring the config file
//!   keys (null for defaults).

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;
use num_rational::Rational64;

use hopflift::expr::num_complex;

use hopflift::config::RunConfig;
use hopflift::expr::{Binding, Domain, Expr};
use hopflift::fields::VectorField;
use hopflift::iterate::{run, solution_record, EquationSystem};
use hopflift::liouville::zn_family;
use hopflift::seeds::parse_expr_with_config;
use hopflift::verify::{holonomy, verify_solution, LoopCurve};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EvalError = 4,
    InvalidArgument = 5,
    /// The iteration ran but did not converge (size blowup, iteration cap,
    /// or evaluation failure); the trace JSON still describes the run.
    NotConverged = 6,
    /// Verification ran and the report is available, but some residual
    /// exceeded its threshold.
    VerifyFailed = 7,
    InternalError = 8,
}

/// Opaque expression handle.
pub struct HlExpr(Expr);

/// Opaque vector-field handle.
pub struct HlField(VectorField);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let cstring = CString::new(message).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn guard<F: FnOnce() -> HlStatus>(f: F) -> HlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            HlStatus::InternalError
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, HlStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(HlStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        HlStatus::InvalidUtf8
    })
}

fn out_string(s: String, out: *mut *mut c_char) -> HlStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HlStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            HlStatus::InternalError
        }
    }
}

fn parse_config(json: *const c_char) -> Result<RunConfig, HlStatus> {
    if json.is_null() {
        return Ok(RunConfig::default());
    }
    let text = unsafe { read_str(json)? };
    serde_json::from_str(text).map_err(|e| {
        set_error(format!("invalid config JSON: {e}"));
        HlStatus::InvalidArgument
    })
}

fn parse_system(system: i32) -> Result<EquationSystem, HlStatus> {
    match system {
        0 => Ok(EquationSystem::SeibergWitten),
        1 => Ok(EquationSystem::Freund),
        other => {
            set_error(format!(
                "unknown system code {other} (0 = Seiberg-Witten, 1 = Freund)"
            ));
            Err(HlStatus::InvalidArgument)
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn hl_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Last error message for this thread, or null when no error is recorded.
/// The returned string is owned by the library until the next failing call
/// on this thread; copy it if it must outlive that.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a `hl_*` call that transfers string
/// ownership and must not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an expression in the library grammar into a new handle.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_parse(src: *const c_char, out: *mut *mut HlExpr) -> HlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return HlStatus::NullPointer;
        }
        let text = match read_str(src) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match hopflift::expr::parse_expression(text) {
            Ok(expr) => {
                *out = Box::into_raw(Box::new(HlExpr(expr)));
                HlStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                HlStatus::ParseError
            }
        }
    })
}

/// Release an expression handle.
///
/// # Safety
/// `expr` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_free(expr: *mut HlExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Print an expression in the re-ingestible grammar. Free the result with
/// `hl_string_free`.
///
/// # Safety
/// `expr` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_print(expr: *const HlExpr, out: *mut *mut c_char) -> HlStatus {
    guard(|| {
        if expr.is_null() || out.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        out_string((*expr).0.to_string(), out)
    })
}

/// Tree node count of an expression (0 on null).
///
/// # Safety
/// `expr` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_node_count(expr: *const HlExpr) -> u64 {
    if expr.is_null() {
        return 0;
    }
    (*expr).0.node_count()
}

/// Exact symbolic derivative with respect to `var`.
///
/// # Safety
/// `expr` must be a live handle; `var` a NUL-terminated string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_differentiate(
    expr: *const HlExpr,
    var: *const c_char,
    out: *mut *mut HlExpr,
) -> HlStatus {
    guard(|| {
        if expr.is_null() || out.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        let var = match read_str(var) {
            Ok(v) => v,
            Err(status) => return status,
        };
        let d = (*expr).0.differentiate(var);
        *out = Box::into_raw(Box::new(HlExpr(d)));
        HlStatus::Ok
    })
}

/// Value-preserving simplification; `positive_domain` enables the rules
/// valid on the positive octant.
///
/// # Safety
/// `expr` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_simplify(
    expr: *const HlExpr,
    positive_domain: bool,
    out: *mut *mut HlExpr,
) -> HlStatus {
    guard(|| {
        if expr.is_null() || out.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        let domain = if positive_domain {
            Domain::Positive
        } else {
            Domain::Unrestricted
        };
        let s = (*expr).0.simplified(domain);
        *out = Box::into_raw(Box::new(HlExpr(s)));
        HlStatus::Ok
    })
}

/// Evaluate an expression at a binding given as parallel arrays of `count`
/// identifier names and complex values. Every free identifier must be
/// bound; `pi` is pre-bound.
///
/// # Safety
/// All array pointers must be valid for `count` elements; strings must be
/// NUL-terminated; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_expr_evaluate(
    expr: *const HlExpr,
    names: *const *const c_char,
    values_re: *const f64,
    values_im: *const f64,
    count: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HlStatus {
    guard(|| {
        if expr.is_null() || out_re.is_null() || out_im.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        if count > 0 && (names.is_null() || values_re.is_null() || values_im.is_null()) {
            set_error("null binding arrays with nonzero count");
            return HlStatus::NullPointer;
        }
        let mut binding = Binding::new();
        for i in 0..count {
            let name = match read_str(*names.add(i)) {
                Ok(n) => n,
                Err(status) => return status,
            };
            binding.set(
                name,
                num_complex_value(*values_re.add(i), *values_im.add(i)),
            );
        }
        match (*expr).0.evaluate(&binding) {
            Ok(v) => {
                *out_re = v.re;
                *out_im = v.im;
                HlStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                HlStatus::EvalError
            }
        }
    })
}

fn num_complex_value(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

/// Parse three component expressions into a vector-field handle. Named
/// constants declared in `config_json` (the `params` object) are allowed.
///
/// # Safety
/// Component strings must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_field_parse(
    hx: *const c_char,
    hy: *const c_char,
    hz: *const c_char,
    config_json: *const c_char,
    out: *mut *mut HlField,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return HlStatus::NullPointer;
        }
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let mut comps = Vec::with_capacity(3);
        for ptr in [hx, hy, hz] {
            let text = match read_str(ptr) {
                Ok(t) => t,
                Err(status) => return status,
            };
            match parse_expr_with_config(text, &cfg) {
                Ok(e) => comps.push(e),
                Err(e) => {
                    set_error(e.to_string());
                    return HlStatus::ParseError;
                }
            }
        }
        let hz_expr = comps.pop().unwrap();
        let hy_expr = comps.pop().unwrap();
        let hx_expr = comps.pop().unwrap();
        *out = Box::into_raw(Box::new(HlField(VectorField::new(hx_expr, hy_expr, hz_expr))));
        HlStatus::Ok
    })
}

/// Release a field handle.
///
/// # Safety
/// `field` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_field_free(field: *mut HlField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Run the fixed-point iteration from a seed field. `system` is 0 for
/// Seiberg-Witten, 1 for Freund. On return the trace JSON is written to
/// `out_trace_json` whenever the run executed (even without convergence);
/// on convergence the solution tuple JSON is written to `out_solution_json`
/// when that pointer is non-null. Timings are zeroed for reproducibility.
///
/// # Safety
/// `field` must be a live handle; output pointers must be valid or null
/// (`out_solution_json` only).
#[no_mangle]
pub unsafe extern "C" fn hl_iterate_run(
    field: *const HlField,
    system: i32,
    config_json: *const c_char,
    out_trace_json: *mut *mut c_char,
    out_solution_json: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        if field.is_null() || out_trace_json.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let system = match parse_system(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let trace = match run(&(*field).0, system, &cfg) {
            Ok(t) => t,
            Err(e) => {
                set_error(e.to_string());
                return HlStatus::InvalidArgument;
            }
        };
        let record = trace.to_record(&cfg.params, false);
        let json = serde_json::to_string_pretty(&record).expect("serializable");
        let status = out_string(json, out_trace_json);
        if status != HlStatus::Ok {
            return status;
        }
        if trace.status.is_success() {
            if !out_solution_json.is_null() {
                let solution = solution_record(&trace, cfg.domain());
                let json = serde_json::to_string_pretty(&solution).expect("serializable");
                let status = out_string(json, out_solution_json);
                if status != HlStatus::Ok {
                    return status;
                }
            }
            HlStatus::Ok
        } else {
            set_error(format!("iteration did not converge: {:?}", trace.status));
            HlStatus::NotConverged
        }
    })
}

/// Verify a candidate generating field against the chosen system; the
/// report JSON is written whenever verification ran. Returns `Ok` only
/// when every residual passes.
///
/// # Safety
/// `field` must be a live handle; `out_report_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_verify_solution(
    field: *const HlField,
    system: i32,
    config_json: *const c_char,
    out_report_json: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        if field.is_null() || out_report_json.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let system = match parse_system(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let report = match verify_solution(&(*field).0, system, &cfg) {
            Ok(r) => r,
            Err(e) => {
                set_error(e.to_string());
                return HlStatus::EvalError;
            }
        };
        let json = serde_json::to_string_pretty(&report).expect("serializable");
        let status = out_string(json, out_report_json);
        if status != HlStatus::Ok {
            return status;
        }
        if report.pass {
            HlStatus::Ok
        } else {
            set_error("verification failed: at least one residual exceeded its threshold");
            HlStatus::VerifyFailed
        }
    })
}

/// Loop holonomy of a potential field around the horizontal unit circle at
/// height `z0`, with `nodes >= 64` quadrature nodes.
///
/// # Safety
/// `field` must be a live handle; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hl_holonomy_unit_circle(
    field: *const HlField,
    z0: f64,
    nodes: usize,
    out_value: *mut f64,
    out_error_estimate: *mut f64,
) -> HlStatus {
    guard(|| {
        if field.is_null() || out_value.is_null() || out_error_estimate.is_null() {
            set_error("null pointer argument");
            return HlStatus::NullPointer;
        }
        match holonomy(
            &(*field).0,
            &LoopCurve::unit_circle(z0),
            nodes,
            &Binding::new(),
        ) {
            Ok(h) => {
                *out_value = h.value;
                *out_error_estimate = h.error_estimate;
                HlStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                HlStatus::EvalError
            }
        }
    })
}

/// Closed-form value of the z^n planar family B = n^2/(rho^2 sin^2(n phi)).
/// The order is `num/den` and must be a positive half-integer.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_liouville_zn(
    num: i64,
    den: i64,
    rho: f64,
    phi: f64,
    out: *mut f64,
) -> HlStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return HlStatus::NullPointer;
        }
        if den == 0 {
            set_error("zero denominator");
            return HlStatus::InvalidArgument;
        }
        match zn_family(Rational64::new(num, den), rho, phi) {
            Ok(v) => {
                *out = v;
                HlStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                HlStatus::InvalidArgument
            }
        }
    })
}
