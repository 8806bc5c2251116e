//! C interface. Every function returns a [`TsStatus`]; on failure the
//! message is kept per thread and read with [`ts_last_error_message`].
//! Objects are opaque handles released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twoscale::fem2d;
use twoscale::homog1d::{averaged_coeff_1d, ExtensionSpec1D};
use twoscale::problem::{AnalyticCoeff2D, Case1d, Coefficient2d, PiecewiseConstantCoeff1D, RandomSines};
use twoscale::rng::ByteStreamRng;
use twoscale::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ExhaustedStream = 3,
    OutOfDomain = 4,
    NonpositiveCoefficient = 5,
    GridMismatch = 6,
    NoConvergence = 7,
    BoundsViolation = 8,
    Io = 9,
    Panic = 10,
}

/// Symmetric 2x2 tensor.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TsTensor2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

pub struct TsByteStream(ByteStreamRng);
pub struct TsCoeff1d(PiecewiseConstantCoeff1D);
pub struct TsCoeff2d(AnalyticCoeff2D);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> TsStatus {
    match e {
        Error::ExhaustedStream { .. } => TsStatus::ExhaustedStream,
        Error::OutOfDomain { .. } | Error::QueryOutsideDomain(..) => TsStatus::OutOfDomain,
        Error::NonpositiveCoefficient { .. } | Error::NonSpdCoefficient { .. } => TsStatus::NonpositiveCoefficient,
        Error::GridMismatch(_) | Error::DegenerateGrid(_) => TsStatus::GridMismatch,
        Error::NoConvergence { .. } => TsStatus::NoConvergence,
        Error::BoundsViolation { .. } => TsStatus::BoundsViolation,
        Error::Io { .. } => TsStatus::Io,
        _ => TsStatus::InvalidArgument,
    }
}

enum Failure {
    Status(TsStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(TsStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            TsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ts_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ts_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Byte stream over a copy of `len` bytes at `bytes`.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_byte_stream_new(bytes: *const u8, len: usize, out: *mut *mut TsByteStream) -> TsStatus {
    guard(|| {
        if bytes.is_null() && len > 0 {
            return Err(null("bytes"));
        }
        let data = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(bytes, len).to_vec() };
        put_box(out, TsByteStream(ByteStreamRng::new(data)))
    })
}

/// Byte stream over the bundled fixture file.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_byte_stream_fixture(out: *mut *mut TsByteStream) -> TsStatus {
    guard(|| put_box(out, TsByteStream(ByteStreamRng::fixture())))
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_byte_stream_open(path: *const c_char, out: *mut *mut TsByteStream) -> TsStatus {
    guard(|| {
        let path = deref(path, "path")?;
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure::Status(TsStatus::InvalidArgument, "path is not UTF-8".into()))?;
        put_box(out, TsByteStream(ByteStreamRng::from_file(path)?))
    })
}

/// Next `xi` in [0, 1].
///
/// # Safety
/// `stream` must come from a `ts_byte_stream_*` constructor; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_byte_stream_next(stream: *mut TsByteStream, out: *mut f64) -> TsStatus {
    guard(|| {
        let s = deref_mut(stream, "stream")?;
        put(out, s.0.next_xi()?)
    })
}

/// # Safety
/// `stream` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ts_byte_stream_free(stream: *mut TsByteStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Random 1D coefficient; `case_index` is 1, 2 or 3. Draws from `stream`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff1d_build(stream: *mut TsByteStream, case_index: u32, out: *mut *mut TsCoeff1d) -> TsStatus {
    guard(|| {
        let s = deref_mut(stream, "stream")?;
        let case = match case_index {
            1 => Case1d::A1,
            2 => Case1d::A2,
            3 => Case1d::A3,
            _ => return Err(Failure::Status(TsStatus::InvalidArgument, format!("case {case_index} is not 1, 2 or 3"))),
        };
        put_box(out, TsCoeff1d(PiecewiseConstantCoeff1D::build(case, &mut s.0)?))
    })
}

/// # Safety
/// `coeff` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff1d_eval(coeff: *const TsCoeff1d, x: f64, out: *mut f64) -> TsStatus {
    guard(|| put(out, deref(coeff, "coeff")?.0.eval(x)?))
}

/// Harmonic mean over the window of `x`; `k = 0` selects the continuous
/// extension, `k >= 1` the discrete one with `k` cells per window.
///
/// # Safety
/// `coeff` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff1d_averaged(coeff: *const TsCoeff1d, k: u32, epsbar: f64, x: f64, out: *mut f64) -> TsStatus {
    guard(|| {
        let c = deref(coeff, "coeff")?;
        let spec = if k == 0 { ExtensionSpec1D::continuous(epsbar)? } else { ExtensionSpec1D::discrete(k as usize, epsbar)? };
        put(out, averaged_coeff_1d(&c.0, &spec, x)?)
    })
}

/// # Safety
/// `coeff` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff1d_free(coeff: *mut TsCoeff1d) {
    if !coeff.is_null() {
        drop(Box::from_raw(coeff));
    }
}

/// The smooth six-term coefficient.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff2d_mingyue(out: *mut *mut TsCoeff2d) -> TsStatus {
    guard(|| put_box(out, TsCoeff2d(AnalyticCoeff2D::MingYue)))
}

/// `10^(beta S)` with `n_sin` modes drawn from `stream`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff2d_random_sines(
    stream: *mut TsByteStream,
    n_sin: usize,
    contrast: f64,
    out: *mut *mut TsCoeff2d,
) -> TsStatus {
    guard(|| {
        let s = deref_mut(stream, "stream")?;
        let r = RandomSines::from_rng(n_sin, contrast, &mut s.0)?;
        put_box(out, TsCoeff2d(AnalyticCoeff2D::RandomSines(r)))
    })
}

/// # Safety
/// `coeff` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff2d_eval(coeff: *const TsCoeff2d, x1: f64, x2: f64, out: *mut f64) -> TsStatus {
    guard(|| put(out, deref(coeff, "coeff")?.0.eval([x1, x2])))
}

/// # Safety
/// `coeff` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ts_coeff2d_free(coeff: *mut TsCoeff2d) {
    if !coeff.is_null() {
        drop(Box::from_raw(coeff));
    }
}

/// Effective tensor of an `n x n` periodic window (`samples[j * n + i]`),
/// plus the asymmetry `|A12 - A21|` before symmetrisation (may be null).
///
/// # Safety
/// `samples` must point to `n * n` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_cell_tensor(samples: *const f64, n: usize, out: *mut TsTensor2, asymmetry: *mut f64) -> TsStatus {
    guard(|| {
        if samples.is_null() {
            return Err(null("samples"));
        }
        let len = n.checked_mul(n).ok_or_else(|| Failure::Status(TsStatus::InvalidArgument, "n overflows".into()))?;
        let s = std::slice::from_raw_parts(samples, len);
        let pair = fem2d::solve_cell_pair(s, n)?;
        let t = pair.effective.tensor;
        put(out, TsTensor2 { a11: t.a11, a12: t.a12, a22: t.a22 })?;
        if !asymmetry.is_null() {
            asymmetry.write(pair.effective.asymmetry);
        }
        Ok(())
    })
}
