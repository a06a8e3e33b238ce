//! C ABI over the `ebos` solver.
//!
//! Matrices cross the boundary as opaque [`EbosMatrix`] handles holding
//! real `f64` data; values are exchanged in row-major order. Every entry
//! point returns an [`EbosStatus`] and never unwinds into the caller. On
//! failure, [`ebos_last_error_message`] describes what went wrong on the
//! calling thread.
//!
//! Handles returned through out-parameters are owned by the caller and must
//! be released with [`ebos_matrix_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ebos::io::{read_matrix, write_matrix};
use ebos::{flops::flop_report, pinv, solve, ColPartition, Error, Mat, Method, PinvOptions, RowPartition};

/// Opaque matrix handle.
pub struct EbosMatrix(Mat);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbosStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    InvalidPartition = 4,
    NonFinite = 5,
    NotOrthogonal = 6,
    NumericalFailure = 7,
    Parse = 8,
    Io = 9,
    /// A Rust panic was caught at the boundary.
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbosMethod {
    Ebos = 0,
    Direct = 1,
    Independent = 2,
}

/// Operation counts for one problem size; see `ebos::flops::FlopReport`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EbosFlops {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub n_total: f64,
    pub f_direct: f64,
    pub ratio: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> EbosStatus {
    if err.is_numerical() {
        return EbosStatus::NumericalFailure;
    }
    match err.root() {
        Error::DimensionMismatch { .. } => EbosStatus::DimensionMismatch,
        Error::InvalidPartition(_) | Error::EmptyBlocks(_) => EbosStatus::InvalidPartition,
        Error::NonFinite { .. } => EbosStatus::NonFinite,
        Error::NotOrthogonal { .. } => EbosStatus::NotOrthogonal,
        Error::Parse { .. } => EbosStatus::Parse,
        Error::Io { .. } => EbosStatus::Io,
        _ => EbosStatus::InvalidArgument,
    }
}

struct Fail(EbosStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(EbosStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording the message of any error or panic.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> EbosStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            EbosStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal error: {msg}"));
            EbosStatus::Internal
        }
    }
}

unsafe fn matrix<'a>(m: *const EbosMatrix, what: &str) -> Result<&'a Mat, Fail> {
    m.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn emit(out: *mut *mut EbosMatrix, m: Mat) {
    *out = Box::into_raw(Box::new(EbosMatrix(m)));
}

unsafe fn path_arg(path: *const c_char) -> Result<String, Fail> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Fail(EbosStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

unsafe fn sizes_arg<'a>(ptr: *const usize, len: usize, what: &str) -> Result<&'a [usize], Fail> {
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn options(tol: f64) -> Result<PinvOptions, Fail> {
    if tol < 0.0 {
        Ok(PinvOptions::automatic())
    } else {
        Ok(PinvOptions::with_tolerance(tol)?)
    }
}

/// Message for the last failing call on this thread, or an empty string.
/// The pointer stays valid until the next `ebos_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ebos_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code; unknown codes give `"unknown status"`.
#[no_mangle]
pub extern "C" fn ebos_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid argument",
        3 => c"dimension mismatch",
        4 => c"invalid partition",
        5 => c"non-finite entry",
        6 => c"blocks not orthogonal",
        7 => c"numerical failure",
        8 => c"parse error",
        9 => c"i/o error",
        10 => c"internal error",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Creates a `rows x cols` matrix from `rows * cols` row-major values, or
/// zeros when `data` is null.
///
/// # Safety
/// `data`, if non-null, must point to `rows * cols` readable doubles and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut EbosMatrix,
) -> EbosStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Fail(EbosStatus::InvalidArgument, "matrix size overflows".into()))?;
        let m = if data.is_null() {
            Mat::zeros(rows, cols)
        } else {
            Mat::from_row_slice(rows, cols, std::slice::from_raw_parts(data, len))?
        };
        emit(out, m);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_free(m: *mut EbosMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_rows(m: *const EbosMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.0.rows())
}

/// Column count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_cols(m: *const EbosMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.0.cols())
}

/// Copies the entries in row-major order into `buf`, which holds `len`
/// doubles; `len` must be at least `rows * cols`.
///
/// # Safety
/// `m` must be a live handle and `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_copy_data(m: *const EbosMatrix, buf: *mut f64, len: usize) -> EbosStatus {
    guard(|| {
        let m = matrix(m, "matrix")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let data = m.to_row_major();
        if len < data.len() {
            return Err(Fail(
                EbosStatus::DimensionMismatch,
                format!("buffer holds {len} values, matrix has {}", data.len()),
            ));
        }
        ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
        Ok(())
    })
}

/// Reads a whitespace- or comma-separated text matrix.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_read(path: *const c_char, out: *mut *mut EbosMatrix) -> EbosStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = read_matrix(path_arg(path)?)?;
        emit(out, m);
        Ok(())
    })
}

/// Writes a matrix as text, one row per line.
///
/// # Safety
/// `m` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ebos_matrix_write(m: *const EbosMatrix, path: *const c_char) -> EbosStatus {
    guard(|| {
        let m = matrix(m, "matrix")?;
        write_matrix(path_arg(path)?, m)?;
        Ok(())
    })
}

/// Moore-Penrose pseudo-inverse. A negative `tol` selects the automatic
/// singular-value cutoff.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ebos_pinv(m: *const EbosMatrix, tol: f64, out: *mut *mut EbosMatrix) -> EbosStatus {
    guard(|| {
        let m = matrix(m, "matrix")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = pinv(m, &options(tol)?)?;
        emit(out, p);
        Ok(())
    })
}

/// Solves `min ‖A - B X C‖_F`. `gpart` lists the column block widths of
/// `B`, `hpart` the row block heights of `C`. `method` is an [`EbosMethod`]
/// value. A negative `tol` selects the automatic cutoff. `out_residual` may
/// be null.
///
/// # Safety
/// Handles must be live, partition arrays readable for their lengths and
/// `out_x` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ebos_solve(
    a: *const EbosMatrix,
    b: *const EbosMatrix,
    c: *const EbosMatrix,
    gpart: *const usize,
    gpart_len: usize,
    hpart: *const usize,
    hpart_len: usize,
    method: u32,
    tol: f64,
    out_x: *mut *mut EbosMatrix,
    out_residual: *mut f64,
) -> EbosStatus {
    guard(|| {
        let (a, b, c) = (matrix(a, "A")?, matrix(b, "B")?, matrix(c, "C")?);
        if out_x.is_null() {
            return Err(null("out_x"));
        }
        let cp = ColPartition::new(sizes_arg(gpart, gpart_len, "gpart")?.to_vec())?;
        let rp = RowPartition::new(sizes_arg(hpart, hpart_len, "hpart")?.to_vec())?;
        let method = match method {
            m if m == EbosMethod::Ebos as u32 => Method::Ebos,
            m if m == EbosMethod::Direct as u32 => Method::Direct,
            m if m == EbosMethod::Independent as u32 => Method::Independent,
            other => return Err(Fail(EbosStatus::InvalidArgument, format!("unknown method {other}"))),
        };
        let r = solve(method, a, b, c, &cp, &rp, &options(tol)?)?;
        if !out_residual.is_null() {
            *out_residual = r.residual;
        }
        emit(out_x, r.x_plus);
        Ok(())
    })
}

/// Operation counts of both methods for `A` of size `m x n` and `C` with
/// `h` rows in `q` blocks.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ebos_flops(m: u64, n: u64, h: u64, q: u64, out: *mut EbosFlops) -> EbosStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = flop_report(m, n, h, q)?;
        *out = EbosFlops {
            n1: r.n1,
            n2: r.n2,
            n3: r.n3,
            n_total: r.n_total,
            f_direct: r.f_direct,
            ratio: r.ratio,
        };
        Ok(())
    })
}
