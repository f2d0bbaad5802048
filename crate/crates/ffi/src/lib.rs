//! C ABI over the `automorphy` crate.
//!
//! Factors of automorphy cross the boundary as opaque `AmFactor` handles.
//! Every fallible call returns an `AmStatus`; on failure a message is kept
//! per thread and can be read back with `am_last_error`.
//!
//! Strings returned by the library are owned by the caller and must be
//! released with `am_string_free`. Handles are released with `am_factor_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use automorphy::classify::{self, BundleDescriptor};
use automorphy::cocycle::{self, FactorOfAutomorphy};
use automorphy::functors;
use automorphy::isogeny::{self, IsogenyContext};
use automorphy::json::{factor_to_json, BundleSpec};
use automorphy::theta::{self, ThetaCharacteristic};
use automorphy::{Error, Torus, C64};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidModulus = 4,
    Domain = 5,
    TorusMismatch = 6,
    NotInvertible = 7,
    Numeric = 8,
    Shape = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque handle to a factor of automorphy together with its torus.
pub struct AmFactor(FactorOfAutomorphy);

/// Outcome of a numeric theta-function check.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AmThetaReport {
    pub max_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AmStatus {
    match e {
        Error::InvalidModulus { .. } => AmStatus::InvalidModulus,
        Error::Domain(_) => AmStatus::Domain,
        Error::TorusMismatch => AmStatus::TorusMismatch,
        Error::NotInvertibleInRing => AmStatus::NotInvertible,
        Error::NonFinite(_) | Error::SingularSample | Error::DetVanishesOnCstar(_) | Error::NotNilpotent(_) => {
            AmStatus::Numeric
        }
        Error::SizeMismatch { .. } | Error::Shape(_) => AmStatus::Shape,
        Error::Parse(_) => AmStatus::Parse,
    }
}

struct Fail(AmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> AmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AmStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(AmStatus::NullPointer, format!("null pointer for {what}")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(AmStatus::NullPointer, format!("null pointer for {what}")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(AmStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn emit_factor(out: *mut *mut AmFactor, f: FactorOfAutomorphy) -> Result<(), Fail> {
    emit(out, AmFactor(f))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(AmStatus::NullPointer, "null output pointer".into()));
    }
    *out = value;
    Ok(())
}

fn torus(re: f64, im: f64) -> Result<Torus, Fail> {
    Ok(Torus::new(C64::new(re, im))?)
}

fn covering(r: u32) -> Result<u32, Fail> {
    if r == 0 {
        return Err(Fail(AmStatus::Domain, "covering degree must be positive".into()));
    }
    Ok(r)
}

/// Message for the most recent failure on this thread, or null.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn am_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn am_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn am_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `f` must be null or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn am_factor_free(f: *mut AmFactor) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_factor_clone(f: *const AmFactor, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| emit_factor(out, borrow(f, "factor")?.0.clone()))
}

/// Parses a bundle document: a torus plus either `A`, `matrix` or `descriptor`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_factor_from_json(json: *const c_char, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| {
        let spec = BundleSpec::parse(text(json, "json")?)?;
        emit_factor(out, spec.factor()?)
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer. Free the result with `am_string_free`.
#[no_mangle]
pub unsafe extern "C" fn am_factor_to_json(f: *const AmFactor, out: *mut *mut c_char) -> AmStatus {
    guard(|| {
        let s = factor_to_json(&borrow(f, "factor")?.0)?;
        let c = CString::new(s).map_err(|e| Fail(AmStatus::Parse, e.to_string()))?;
        write(out, c.into_raw())
    })
}

/// Indecomposable bundle of rank `r`, degree `d` and parameter `a`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_normal_form(
    tau_re: f64,
    tau_im: f64,
    r: usize,
    d: i64,
    a_re: f64,
    a_im: f64,
    out: *mut *mut AmFactor,
) -> AmStatus {
    guard(|| {
        emit_factor(
            out,
            classify::normal_form(&torus(tau_re, tau_im)?, r, d, C64::new(a_re, a_im))?,
        )
    })
}

/// Same bundle built as a pushforward from the cover.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_atiyah_construct(
    tau_re: f64,
    tau_im: f64,
    r: usize,
    d: i64,
    a_re: f64,
    a_im: f64,
    out: *mut *mut AmFactor,
) -> AmStatus {
    guard(|| {
        emit_factor(
            out,
            classify::atiyah_construct(&torus(tau_re, tau_im)?, r, d, C64::new(a_re, a_im))?,
        )
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_factor_rank(f: *const AmFactor, out: *mut usize) -> AmStatus {
    guard(|| write(out, classify::rank(&borrow(f, "factor")?.0)))
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_factor_degree(f: *const AmFactor, out: *mut i64) -> AmStatus {
    guard(|| write(out, classify::degree(&borrow(f, "factor")?.0)?))
}

/// Evaluates `A(u)` and writes `n*n` complex entries, row-major, as interleaved
/// real and imaginary parts. `len` is the capacity of `buf` in doubles.
///
/// # Safety
/// `f` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn am_factor_eval(
    f: *const AmFactor,
    u_re: f64,
    u_im: f64,
    buf: *mut f64,
    len: usize,
) -> AmStatus {
    guard(|| {
        let f = &borrow(f, "factor")?.0;
        let n = f.rank();
        if len < 2 * n * n {
            return Err(Fail(
                AmStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", 2 * n * n),
            ));
        }
        if buf.is_null() {
            return Err(Fail(AmStatus::NullPointer, "null buffer".into()));
        }
        let m = f.generator().eval_at(C64::new(u_re, u_im))?;
        let out = std::slice::from_raw_parts_mut(buf, 2 * n * n);
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                out[2 * (i * n + j)] = z.re;
                out[2 * (i * n + j) + 1] = z.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `f` and `g` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_tensor(f: *const AmFactor, g: *const AmFactor, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| emit_factor(out, functors::tensor(&borrow(f, "left")?.0, &borrow(g, "right")?.0)?))
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_sym_power(f: *const AmFactor, n: usize, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| emit_factor(out, functors::sym_power(&borrow(f, "factor")?.0, n)?))
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_wedge_power(f: *const AmFactor, k: usize, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| emit_factor(out, functors::wedge_power(&borrow(f, "factor")?.0, k)?))
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_dual(f: *const AmFactor, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| emit_factor(out, functors::dual(&borrow(f, "factor")?.0)?))
}

/// Pullback to the `r`-fold cover.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_pullback(f: *const AmFactor, r: u32, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| {
        let f = &borrow(f, "factor")?.0;
        let ctx = IsogenyContext::new(*f.torus(), covering(r)?)?;
        emit_factor(out, isogeny::pullback(&ctx, f)?)
    })
}

/// Pushforward from the `r`-fold cover; the torus of `f` is taken as the cover.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_pushforward(f: *const AmFactor, r: u32, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| {
        let f = &borrow(f, "factor")?.0;
        let r = covering(r)?;
        let ctx = IsogenyContext::new(Torus::new(f.torus().tau() / r as f64)?, r)?;
        emit_factor(out, isogeny::pushforward(&ctx, f)?)
    })
}

/// `A(m, u)` as a factor on the same torus.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_iterate(f: *const AmFactor, m: i64, out: *mut *mut AmFactor) -> AmStatus {
    guard(|| {
        let f = &borrow(f, "factor")?.0;
        emit_factor(out, FactorOfAutomorphy::new(*f.torus(), cocycle::iterate(f, m)?)?)
    })
}

/// Writes 1 if `A(u) B(u) = B(qu) A'(u)` holds for the witness matrix `b`, else 0.
/// The witness is passed as a factor whose generator is `B`.
///
/// # Safety
/// All handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_check_witness(
    f: *const AmFactor,
    g: *const AmFactor,
    b: *const AmFactor,
    out: *mut c_int,
) -> AmStatus {
    guard(|| {
        let w = cocycle::EquivalenceWitness::new(borrow(b, "witness")?.0.generator().clone())?;
        let holds = cocycle::check_witness(&borrow(f, "left")?.0, &borrow(g, "right")?.0, &w)?;
        write(out, holds as c_int)
    })
}

/// Recognizes an indecomposable degree-zero factor. On success writes 1 and the
/// descriptor fields; writes 0 when the factor is not of that form.
///
/// # Safety
/// `f` must be a live handle and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn am_recognize_deg0(
    f: *const AmFactor,
    found: *mut c_int,
    rank: *mut usize,
    a_re: *mut f64,
    a_im: *mut f64,
) -> AmStatus {
    guard(|| {
        let hit: Option<BundleDescriptor> = classify::recognize_deg0(&borrow(f, "factor")?.0)?;
        write(found, hit.is_some() as c_int)?;
        if let Some(d) = hit {
            write(rank, d.rank)?;
            write(a_re, d.param.re)?;
            write(a_im, d.param.im)?;
        }
        Ok(())
    })
}

/// Checks the quasi-periodicity of the theta function with characteristic `(a, b)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn am_theta_check(
    tau_re: f64,
    tau_im: f64,
    a: f64,
    b: f64,
    terms: u32,
    samples: usize,
    seed: u64,
    out: *mut AmThetaReport,
) -> AmStatus {
    guard(|| {
        let t = torus(tau_re, tau_im)?;
        let xi = ThetaCharacteristic::new(a, b)?;
        let r = theta::verify_characteristic(&t, &xi, terms, samples, seed);
        write(
            out,
            AmThetaReport {
                max_residual: r.max_residual,
                samples: r.samples,
                pass: r.pass,
            },
        )
    })
}
