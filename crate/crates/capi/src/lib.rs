//! C ABI over the affine-toeplitz library: opaque handles for measures and
//! state oracles, status-code errors with a thread-local message, and plain
//! u64 quadruples (a, m, n, b) for monomials. The matching header is
//! generated into `include/affine_toeplitz.h` at build time.
//!
//! Conventions:
//!
//! - Constructors write a freshly allocated handle through an out pointer
//!   and return [`AtStatus::Ok`]; on any other status the out pointer is
//!   left untouched.
//! - Every handle has exactly one `*_free` function; passing null to a
//!   `*_free` function is a no-op.
//! - After a call returns a status other than [`AtStatus::Ok`], the reason
//!   is available from [`at_last_error_message`] until the next failing
//!   call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use affine_toeplitz::affine::ConePoint;
use affine_toeplitz::measure::Measure;
use affine_toeplitz::monomial::{Monomial, StarMonomial};
use affine_toeplitz::spatial::spatial_kms;
use affine_toeplitz::state::{
    finite_prime_kms_state, ground_state, kms_state, KmsParams, StateOracle, ToeplitzStateSpec,
};
use affine_toeplitz::Error;
use num_traits::ToPrimitive;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed input: unknown names, bad JSON, zero legs, wrong weights.
    InvalidArgument = 3,
    /// Mathematically out of range: β below the convergence threshold,
    /// legs outside the prime set, measures without the required structure.
    DomainError = 4,
    /// A result did not fit the fixed-width C types.
    Overflow = 5,
    /// An internal invariant failed; the library state is still sound.
    Internal = 6,
}

/// A probability measure on the unit circle (opaque).
pub struct AtMeasure(Measure);

/// A state oracle on spanning monomials (opaque).
pub struct AtState(StateOracle);

/// One state evaluation: value and truncation error bound (0 when exact).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtValue {
    pub re: f64,
    pub im: f64,
    pub error_bound: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for(err: &Error) -> AtStatus {
    match err {
        Error::NotSmooth { .. }
        | Error::BetaTooCloseToOne { .. }
        | Error::CutoffExceeded { .. }
        | Error::NonAtomicMeasure
        | Error::GridMismatch { .. } => AtStatus::DomainError,
        Error::Overflow(_) => AtStatus::Overflow,
        Error::LemmaViolation { .. } => AtStatus::Internal,
        _ => AtStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> AtStatus {
    set_error(&err.to_string());
    status_for(err)
}

fn fail_with(status: AtStatus, message: &str) -> AtStatus {
    set_error(message);
    status
}

/// Runs a body that may panic; panics become [`AtStatus::Internal`] instead
/// of crossing the FFI boundary.
fn guarded(body: impl FnOnce() -> AtStatus) -> AtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail_with(AtStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, AtStatus> {
    if ptr.is_null() {
        return Err(fail_with(AtStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail_with(AtStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> AtStatus {
    if out.is_null() {
        return fail_with(AtStatus::NullPointer, "null out pointer");
    }
    out.write(value);
    AtStatus::Ok
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn at_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; never freed by
/// the caller.
#[no_mangle]
pub extern "C" fn at_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by a label function.
///
/// # Safety
/// `text` must be null or a pointer previously returned by this library's
/// label functions, not freed before.
#[no_mangle]
pub unsafe extern "C" fn at_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Builds a built-in measure: "lebesgue", "delta1", or "delta-1".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_measure_named(
    name: *const c_char,
    out: *mut *mut AtMeasure,
) -> AtStatus {
    guarded(|| {
        let name = match read_str(name) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match Measure::named(name) {
            Ok(mu) => write_out(out, Box::into_raw(Box::new(AtMeasure(mu)))),
            Err(err) => fail(&err),
        }
    })
}

/// Parses a measure from its JSON wire form, e.g.
/// `{"kind":"atoms","atoms":[{"turns":{"num":0,"den":1},"weight":{"num":1,"den":1}}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_measure_from_json(
    json: *const c_char,
    out: *mut *mut AtMeasure,
) -> AtStatus {
    guarded(|| {
        let text = match read_str(json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match serde_json::from_str::<Measure>(text) {
            Ok(mu) => write_out(out, Box::into_raw(Box::new(AtMeasure(mu)))),
            Err(err) => fail_with(AtStatus::InvalidArgument, &err.to_string()),
        }
    })
}

/// Human-readable label of the measure; free with [`at_string_free`].
/// Returns null if `measure` is null.
///
/// # Safety
/// `measure` must be null or a live measure handle.
#[no_mangle]
pub unsafe extern "C" fn at_measure_label(measure: *const AtMeasure) -> *mut c_char {
    if measure.is_null() {
        return std::ptr::null_mut();
    }
    let label = (*measure).0.label().replace('\0', " ");
    CString::new(label).unwrap_or_default().into_raw()
}

/// # Safety
/// `measure` must be null or a live measure handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn at_measure_free(measure: *mut AtMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

unsafe fn new_state(
    out: *mut *mut AtState,
    oracle: Result<StateOracle, Error>,
) -> AtStatus {
    match oracle {
        Ok(state) => write_out(out, Box::into_raw(Box::new(AtState(state)))),
        Err(err) => fail(&err),
    }
}

/// The KMS_β equilibrium state ψ_{β,μ} on the full algebra; needs β > 1.
///
/// # Safety
/// `mu` must be a live measure handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_state_kms(
    beta: f64,
    mu: *const AtMeasure,
    out: *mut *mut AtState,
) -> AtStatus {
    guarded(|| {
        if mu.is_null() {
            return fail_with(AtStatus::NullPointer, "null measure handle");
        }
        new_state(out, kms_state(&KmsParams::new(beta), &(*mu).0))
    })
}

/// The KMS_β state restricted to legs that factor over the given primes;
/// defined for every β > 0.
///
/// # Safety
/// `primes` must point to `primes_len` readable u64 values; `mu` must be a
/// live measure handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_state_kms_finite(
    beta: f64,
    primes: *const u64,
    primes_len: usize,
    mu: *const AtMeasure,
    out: *mut *mut AtState,
) -> AtStatus {
    guarded(|| {
        if mu.is_null() || (primes.is_null() && primes_len > 0) {
            return fail_with(AtStatus::NullPointer, "null measure or prime set");
        }
        let primes = std::slice::from_raw_parts(primes, primes_len).to_vec();
        let params = KmsParams::new(beta).with_prime_set(primes);
        new_state(out, finite_prime_kms_state(&params, &(*mu).0))
    })
}

/// The ground state pulled back from the measure's Toeplitz state.
///
/// # Safety
/// `mu` must be a live measure handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_state_ground(
    mu: *const AtMeasure,
    out: *mut *mut AtState,
) -> AtStatus {
    guarded(|| {
        if mu.is_null() {
            return fail_with(AtStatus::NullPointer, "null measure handle");
        }
        let spec = ToeplitzStateSpec::from_measure(&(*mu).0);
        new_state(out, Ok(ground_state(spec)))
    })
}

/// Independent numerical oracle: ψ_{β,μ} evaluated in the truncated
/// Hilbert-space model at the given depth. Needs β > 1 and a purely
/// atomic measure.
///
/// # Safety
/// `mu` must be a live measure handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_state_spatial(
    beta: f64,
    mu: *const AtMeasure,
    depth: u64,
    out: *mut *mut AtState,
) -> AtStatus {
    guarded(|| {
        if mu.is_null() {
            return fail_with(AtStatus::NullPointer, "null measure handle");
        }
        new_state(out, spatial_kms(beta, &(*mu).0, depth))
    })
}

/// Human-readable label of the state; free with [`at_string_free`].
/// Returns null if `state` is null.
///
/// # Safety
/// `state` must be null or a live state handle.
#[no_mangle]
pub unsafe extern "C" fn at_state_label(state: *const AtState) -> *mut c_char {
    if state.is_null() {
        return std::ptr::null_mut();
    }
    let label = (*state).0.label().replace('\0', " ");
    CString::new(label).unwrap_or_default().into_raw()
}

/// Evaluates the state on the monomial V_a S^m S^{*n} V_b^*.
///
/// # Safety
/// `state` must be a live state handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn at_state_evaluate(
    state: *const AtState,
    a: u64,
    m: u64,
    n: u64,
    b: u64,
    out: *mut AtValue,
) -> AtStatus {
    guarded(|| {
        if state.is_null() {
            return fail_with(AtStatus::NullPointer, "null state handle");
        }
        let x = match Monomial::new(a, m, n, b) {
            Ok(x) => x,
            Err(err) => return fail(&err),
        };
        match (*state).0.evaluate(&x) {
            Ok(value) => write_out(
                out,
                AtValue {
                    re: value.value.re,
                    im: value.value.im,
                    error_bound: value.error_bound,
                },
            ),
            Err(err) => fail(&err),
        }
    })
}

/// # Safety
/// `state` must be null or a live state handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn at_state_free(state: *mut AtState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn read_quad(ptr: *const u64) -> Result<Monomial, AtStatus> {
    if ptr.is_null() {
        return Err(fail_with(AtStatus::NullPointer, "null monomial quadruple"));
    }
    let quad = std::slice::from_raw_parts(ptr, 4);
    Monomial::new(quad[0], quad[1], quad[2], quad[3]).map_err(|err| fail(&err))
}

unsafe fn write_quad(out: *mut u64, x: &Monomial) -> AtStatus {
    if out.is_null() {
        return fail_with(AtStatus::NullPointer, "null out pointer");
    }
    match x.as_u64_tuple() {
        Some((a, m, n, b)) => {
            let slot = std::slice::from_raw_parts_mut(out, 4);
            slot.copy_from_slice(&[a, m, n, b]);
            AtStatus::Ok
        }
        None => fail_with(
            AtStatus::Overflow,
            &format!("product {x} does not fit u64 components"),
        ),
    }
}

/// Normal-form product of two spanning monomials, each given as the
/// quadruple [a, m, n, b] of V_a S^m S^{*n} V_b^*.
///
/// # Safety
/// `x` and `y` must each point to 4 readable u64 values; `out` must point
/// to 4 writable u64 values.
#[no_mangle]
pub unsafe extern "C" fn at_monomial_product(
    x: *const u64,
    y: *const u64,
    out: *mut u64,
) -> AtStatus {
    guarded(|| {
        let x = match read_quad(x) {
            Ok(x) => x,
            Err(status) => return status,
        };
        let y = match read_quad(y) {
            Ok(y) => y,
            Err(status) => return status,
        };
        write_quad(out, &x.mul(&y))
    })
}

/// Adjoint of a spanning monomial as a quadruple [a, m, n, b].
///
/// # Safety
/// `x` must point to 4 readable u64 values; `out` must point to 4 writable
/// u64 values.
#[no_mangle]
pub unsafe extern "C" fn at_monomial_adjoint(x: *const u64, out: *mut u64) -> AtStatus {
    guarded(|| {
        let x = match read_quad(x) {
            Ok(x) => x,
            Err(status) => return status,
        };
        write_quad(out, &x.adjoint())
    })
}

/// Least upper bound (a, m) ∨ (b, n) in the cone ℕ^× ⋉ ℕ.
///
/// # Safety
/// `out_a` and `out_m` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn at_cone_join(
    a: u64,
    m: u64,
    b: u64,
    n: u64,
    out_a: *mut u64,
    out_m: *mut u64,
) -> AtStatus {
    guarded(|| {
        if out_a.is_null() || out_m.is_null() {
            return fail_with(AtStatus::NullPointer, "null out pointer");
        }
        let x = match ConePoint::new(a, m) {
            Ok(x) => x,
            Err(err) => return fail(&err),
        };
        let y = match ConePoint::new(b, n) {
            Ok(y) => y,
            Err(err) => return fail(&err),
        };
        let join = x.join(&y);
        match join.a().to_u64().zip(join.m().to_u64()) {
            Some((ja, jm)) => {
                out_a.write(ja);
                out_m.write(jm);
                AtStatus::Ok
            }
            None => fail_with(
                AtStatus::Overflow,
                &format!("join {join} does not fit u64 components"),
            ),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn named(name: &str) -> *mut AtMeasure {
        let name = CString::new(name).unwrap();
        let mut out = ptr::null_mut();
        let status = unsafe { at_measure_named(name.as_ptr(), &mut out) };
        assert_eq!(status, AtStatus::Ok);
        assert!(!out.is_null());
        out
    }

    fn last_error() -> String {
        unsafe {
            CStr::from_ptr(at_last_error_message())
                .to_string_lossy()
                .into_owned()
        }
    }

    #[test]
    fn version_is_static() {
        let text = unsafe { CStr::from_ptr(at_version()) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn measure_lifecycle_and_labels() {
        let mu = named("delta1");
        let label = unsafe { at_measure_label(mu) };
        let text = unsafe { CStr::from_ptr(label) }.to_str().unwrap().to_owned();
        assert_eq!(text, "delta1");
        unsafe {
            at_string_free(label);
            at_measure_free(mu);
        }
    }

    #[test]
    fn kms_closed_form_through_ffi() {
        let mu = named("delta1");
        let mut state = ptr::null_mut();
        assert_eq!(unsafe { at_state_kms(2.0, mu, &mut state) }, AtStatus::Ok);
        let mut value = AtValue {
            re: f64::NAN,
            im: f64::NAN,
            error_bound: f64::NAN,
        };
        assert_eq!(
            unsafe { at_state_evaluate(state, 3, 5, 1, 3, &mut value) },
            AtStatus::Ok
        );
        assert_eq!(value.re, 1.0 / 9.0);
        assert_eq!(value.im, 0.0);
        assert_eq!(value.error_bound, 0.0);

        let label = unsafe { at_state_label(state) };
        let text = unsafe { CStr::from_ptr(label) }.to_str().unwrap().to_owned();
        assert!(text.contains("kms"), "label: {text}");
        unsafe {
            at_string_free(label);
            at_state_free(state);
            at_measure_free(mu);
        }
    }

    #[test]
    fn kms_needs_beta_above_one() {
        let mu = named("delta1");
        let mut state = ptr::null_mut();
        let status = unsafe { at_state_kms(0.5, mu, &mut state) };
        assert_eq!(status, AtStatus::InvalidArgument);
        assert!(state.is_null(), "out pointer must stay untouched");
        assert!(last_error().contains("beta"), "message: {}", last_error());
        unsafe { at_measure_free(mu) };
    }

    #[test]
    fn finite_prime_state_checks_smoothness() {
        let mu = named("delta1");
        let primes = [2u64, 3];
        let mut state = ptr::null_mut();
        assert_eq!(
            unsafe { at_state_kms_finite(0.5, primes.as_ptr(), primes.len(), mu, &mut state) },
            AtStatus::Ok
        );
        let mut value = AtValue {
            re: 0.0,
            im: 0.0,
            error_bound: 0.0,
        };
        assert_eq!(
            unsafe { at_state_evaluate(state, 1, 0, 0, 1, &mut value) },
            AtStatus::Ok
        );
        assert_eq!(value.re, 1.0);

        assert_eq!(
            unsafe { at_state_evaluate(state, 5, 0, 0, 5, &mut value) },
            AtStatus::DomainError
        );
        assert!(last_error().contains("E-smooth"), "{}", last_error());
        unsafe {
            at_state_free(state);
            at_measure_free(mu);
        }
    }

    #[test]
    fn ground_state_vanishes_off_unit_legs() {
        let mu = named("delta-1");
        let mut state = ptr::null_mut();
        assert_eq!(unsafe { at_state_ground(mu, &mut state) }, AtStatus::Ok);
        let mut value = AtValue {
            re: 0.0,
            im: 0.0,
            error_bound: 0.0,
        };
        assert_eq!(
            unsafe { at_state_evaluate(state, 1, 2, 2, 1, &mut value) },
            AtStatus::Ok
        );
        assert_eq!((value.re, value.im), (1.0, 0.0));
        assert_eq!(
            unsafe { at_state_evaluate(state, 2, 0, 0, 2, &mut value) },
            AtStatus::Ok
        );
        assert_eq!((value.re, value.im), (0.0, 0.0));
        unsafe {
            at_state_free(state);
            at_measure_free(mu);
        }
    }

    #[test]
    fn spatial_state_matches_closed_form_within_bound() {
        let mu = named("delta1");
        let mut state = ptr::null_mut();
        assert_eq!(
            unsafe { at_state_spatial(2.0, mu, 500, &mut state) },
            AtStatus::Ok
        );
        let mut value = AtValue {
            re: 0.0,
            im: 0.0,
            error_bound: 0.0,
        };
        assert_eq!(
            unsafe { at_state_evaluate(state, 2, 1, 1, 2, &mut value) },
            AtStatus::Ok
        );
        assert!((value.re - 0.25).abs() <= value.error_bound + 1e-12);
        unsafe {
            at_state_free(state);
            at_measure_free(mu);
        }
    }

    #[test]
    fn measure_from_json_wire_form() {
        let json = CString::new(
            r#"{"kind":"atoms","atoms":[{"turns":{"num":1,"den":2},"weight":{"num":1,"den":1}}]}"#,
        )
        .unwrap();
        let mut mu = ptr::null_mut();
        assert_eq!(
            unsafe { at_measure_from_json(json.as_ptr(), &mut mu) },
            AtStatus::Ok
        );
        let label = unsafe { at_measure_label(mu) };
        let text = unsafe { CStr::from_ptr(label) }.to_str().unwrap().to_owned();
        assert_eq!(text, "delta-1");
        unsafe {
            at_string_free(label);
            at_measure_free(mu);
        }

        let bad = CString::new("{not json").unwrap();
        assert_eq!(
            unsafe { at_measure_from_json(bad.as_ptr(), &mut mu) },
            AtStatus::InvalidArgument
        );
    }

    #[test]
    fn null_and_name_errors() {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { at_measure_named(ptr::null(), &mut out) },
            AtStatus::NullPointer
        );
        let unknown = CString::new("nonsense").unwrap();
        assert_eq!(
            unsafe { at_measure_named(unknown.as_ptr(), &mut out) },
            AtStatus::InvalidArgument
        );
        let mut state = ptr::null_mut();
        assert_eq!(
            unsafe { at_state_kms(2.0, ptr::null(), &mut state) },
            AtStatus::NullPointer
        );
        let mut value = AtValue {
            re: 0.0,
            im: 0.0,
            error_bound: 0.0,
        };
        assert_eq!(
            unsafe { at_state_evaluate(ptr::null(), 1, 0, 0, 1, &mut value) },
            AtStatus::NullPointer
        );
    }

    #[test]
    fn monomial_product_and_adjoint() {
        let x = [2u64, 1, 0, 3];
        let y = [6u64, 0, 2, 5];
        let mut out = [0u64; 4];
        assert_eq!(
            unsafe { at_monomial_product(x.as_ptr(), y.as_ptr(), out.as_mut_ptr()) },
            AtStatus::Ok
        );
        assert_eq!(out, [4, 2, 2, 5]);

        assert_eq!(
            unsafe { at_monomial_adjoint(x.as_ptr(), out.as_mut_ptr()) },
            AtStatus::Ok
        );
        assert_eq!(out, [3, 0, 1, 2]);

        // Legs of 0 are rejected, overflowing products are flagged.
        let zero = [0u64, 0, 0, 1];
        assert_eq!(
            unsafe { at_monomial_product(zero.as_ptr(), y.as_ptr(), out.as_mut_ptr()) },
            AtStatus::InvalidArgument
        );
        let huge = [u64::MAX, 0, 0, 1];
        let wide = [u64::MAX, 0, 0, 1];
        assert_eq!(
            unsafe { at_monomial_product(huge.as_ptr(), wide.as_ptr(), out.as_mut_ptr()) },
            AtStatus::Overflow
        );
    }

    #[test]
    fn cone_join_through_ffi() {
        let (mut a, mut m) = (0u64, 0u64);
        assert_eq!(
            unsafe { at_cone_join(4, 3, 6, 1, &mut a, &mut m) },
            AtStatus::Ok
        );
        assert_eq!((a, m), (12, 9));
        assert_eq!(
            unsafe { at_cone_join(0, 0, 1, 0, &mut a, &mut m) },
            AtStatus::InvalidArgument
        );
    }

    #[test]
    fn generated_header_is_current() {
        let header = include_str!("../include/affine_toeplitz.h");
        for symbol in [
            "at_version",
            "at_last_error_message",
            "at_measure_named",
            "at_measure_from_json",
            "at_state_kms",
            "at_state_kms_finite",
            "at_state_ground",
            "at_state_spatial",
            "at_state_evaluate",
            "at_monomial_product",
            "at_cone_join",
            "at_string_free",
            "AT_STATUS_OK",
        ] {
            assert!(header.contains(symbol), "header is missing {symbol}");
        }
    }
}
