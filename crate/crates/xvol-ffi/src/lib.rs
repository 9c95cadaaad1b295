//! C ABI over the `xvol` library.
//!
//! Conventions:
//!
//! - every function returns an [`XvolStatus`]; results go through out
//!   pointers;
//! - strings are written into caller-provided buffers as NUL-terminated
//!   UTF-8; `written` receives the required size in bytes (including the
//!   NUL), and [`XvolStatus::BufferTooSmall`] is returned without writing
//!   when the buffer cannot hold it — call again with a larger buffer;
//! - `XvolClassification` and `XvolSampler` are opaque handles owned by the
//!   library; release them with the matching `_free` function. A `_free`
//!   of NULL is a no-op;
//! - panics never unwind across the boundary; they surface as
//!   [`XvolStatus::InternalError`].

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use xvol::analytic;
use xvol::montecarlo::{self, Method};
use xvol::pt::{self, PtClassification};
use xvol::sampler::{self, StreamRng};
use xvol::state::Dims;
use xvol::Error;

/// Result of every FFI call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XvolStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Arguments outside the supported domain (dimensions below 2, sample
    /// counts below 2, unknown method, zero workers).
    InvalidArgument = 2,
    /// A caller-provided buffer is too small; `written` holds the needed size.
    BufferTooSmall = 3,
    /// Unexpected internal failure.
    InternalError = 4,
}

/// Estimator selector for [`xvol_estimate`].
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XvolMethod {
    Naive = 0,
    RaoBlackwell = 1,
}

/// One Monte Carlo result.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct XvolEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Exact ratio as a double, the z-score reference.
    pub analytic: f64,
    pub z_score: f64,
    pub count: u64,
    pub seed: u64,
}

/// Opaque partial-transpose classification handle.
pub struct XvolClassification {
    inner: PtClassification,
}

/// Opaque seeded sampler handle.
pub struct XvolSampler {
    dims: Dims,
    rng: StreamRng,
}

fn status_of(err: &Error) -> XvolStatus {
    match err {
        Error::InvalidDims { .. } | Error::CountTooSmall { .. } => XvolStatus::InvalidArgument,
        _ => XvolStatus::InternalError,
    }
}

fn guarded(body: impl FnOnce() -> XvolStatus) -> XvolStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(XvolStatus::InternalError)
}

/// Writes `text` (plus NUL) into `buf`; reports the needed size through
/// `written` either way.
unsafe fn write_string(
    text: &str,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> XvolStatus {
    let needed = text.len() + 1;
    if !written.is_null() {
        *written = needed;
    }
    if buf.is_null() {
        return XvolStatus::NullPointer;
    }
    if cap < needed {
        return XvolStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    XvolStatus::Ok
}

/// Exact PPT-to-total volume ratio (2/5)^(⌊m/2⌋·⌊n/2⌋) as a double.
///
/// # Safety
/// `out_value` must be NULL or point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn xvol_ratio(m: u32, n: u32, out_value: *mut f64) -> XvolStatus {
    guarded(|| {
        if out_value.is_null() {
            return XvolStatus::NullPointer;
        }
        match Dims::new(m, n) {
            Ok(dims) => {
                unsafe { *out_value = analytic::rational_to_f64(&analytic::ratio(dims)) };
                XvolStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Exact ratio as a "numerator/denominator" string.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes; `written` must be
/// NULL or point to a writable size_t.
#[no_mangle]
pub unsafe extern "C" fn xvol_ratio_string(
    m: u32,
    n: u32,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> XvolStatus {
    guarded(|| match Dims::new(m, n) {
        Ok(dims) => {
            let text = analytic::ratio(dims).to_string();
            unsafe { write_string(&text, buf, cap, written) }
        }
        Err(e) => status_of(&e),
    })
}

/// Body volume of the m×n X-states: exact rational coefficient (written as
/// "numerator/denominator") and the power of π it multiplies.
///
/// # Safety
/// Pointer arguments must be NULL or valid for writes as documented on
/// [`xvol_ratio_string`].
#[no_mangle]
pub unsafe extern "C" fn xvol_volume_x(
    m: u32,
    n: u32,
    out_pi_power: *mut u32,
    coeff_buf: *mut c_char,
    coeff_cap: usize,
    coeff_written: *mut usize,
) -> XvolStatus {
    volume_impl(
        m,
        n,
        false,
        out_pi_power,
        coeff_buf,
        coeff_cap,
        coeff_written,
    )
}

/// PPT volume, same encoding as [`xvol_volume_x`].
///
/// # Safety
/// Same contract as [`xvol_volume_x`].
#[no_mangle]
pub unsafe extern "C" fn xvol_volume_ppt(
    m: u32,
    n: u32,
    out_pi_power: *mut u32,
    coeff_buf: *mut c_char,
    coeff_cap: usize,
    coeff_written: *mut usize,
) -> XvolStatus {
    volume_impl(
        m,
        n,
        true,
        out_pi_power,
        coeff_buf,
        coeff_cap,
        coeff_written,
    )
}

fn volume_impl(
    m: u32,
    n: u32,
    ppt: bool,
    out_pi_power: *mut u32,
    coeff_buf: *mut c_char,
    coeff_cap: usize,
    coeff_written: *mut usize,
) -> XvolStatus {
    guarded(|| {
        if out_pi_power.is_null() {
            return XvolStatus::NullPointer;
        }
        match Dims::new(m, n) {
            Ok(dims) => {
                let volume = if ppt {
                    analytic::volume_ppt(dims)
                } else {
                    analytic::volume_x(dims)
                };
                let status = unsafe {
                    write_string(
                        &volume.coeff().to_string(),
                        coeff_buf,
                        coeff_cap,
                        coeff_written,
                    )
                };
                if status == XvolStatus::Ok {
                    unsafe { *out_pi_power = volume.pi_power() };
                }
                status
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds the partial-transpose classification for (m, n). The handle must
/// be released with [`xvol_classification_free`].
///
/// # Safety
/// `out` must be NULL or point to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn xvol_classification_new(
    m: u32,
    n: u32,
    out: *mut *mut XvolClassification,
) -> XvolStatus {
    guarded(|| {
        if out.is_null() {
            return XvolStatus::NullPointer;
        }
        match Dims::new(m, n) {
            Ok(dims) => {
                let handle = Box::new(XvolClassification {
                    inner: pt::classify(dims),
                });
                unsafe { *out = Box::into_raw(handle) };
                XvolStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `handle` must come from [`xvol_classification_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn xvol_classification_free(handle: *mut XvolClassification) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Counts A (quadruples), B (fixed pairs), C (center flag).
///
/// # Safety
/// `handle` must be a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn xvol_classification_counts(
    handle: *const XvolClassification,
    out_a: *mut u32,
    out_b: *mut u32,
    out_c: *mut u32,
) -> XvolStatus {
    guarded(|| {
        if handle.is_null() || out_a.is_null() || out_b.is_null() || out_c.is_null() {
            return XvolStatus::NullPointer;
        }
        let cls = unsafe { &(*handle).inner };
        unsafe {
            *out_a = cls.count_a() as u32;
            *out_b = cls.count_b() as u32;
            *out_c = cls.count_c() as u32;
        }
        XvolStatus::Ok
    })
}

/// Full classification as JSON:
/// `{m, n, A, B, C, quadruples, fixed_pairs, center}`.
///
/// # Safety
/// `handle` must be a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn xvol_classification_json(
    handle: *const XvolClassification,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> XvolStatus {
    guarded(|| {
        if handle.is_null() {
            return XvolStatus::NullPointer;
        }
        let json =
            serde_json::to_string(unsafe { &(*handle).inner }).expect("classification serializes");
        unsafe { write_string(&json, buf, cap, written) }
    })
}

/// Creates a sampler for Hilbert-Schmidt-uniform X-states. States are read
/// out with [`xvol_sampler_next`]; release with [`xvol_sampler_free`].
///
/// # Safety
/// `out` must be NULL or point to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn xvol_sampler_new(
    m: u32,
    n: u32,
    seed: u64,
    out: *mut *mut XvolSampler,
) -> XvolStatus {
    guarded(|| {
        if out.is_null() {
            return XvolStatus::NullPointer;
        }
        match Dims::new(m, n) {
            Ok(dims) => {
                let handle = Box::new(XvolSampler {
                    dims,
                    rng: sampler::master_rng(seed),
                });
                unsafe { *out = Box::into_raw(handle) };
                XvolStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `handle` must come from [`xvol_sampler_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn xvol_sampler_free(handle: *mut XvolSampler) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Draws the next state. `diag` receives mn entries; `offdiag` receives
/// ⌊mn/2⌋ complex entries interleaved as (re, im), i.e. 2⌊mn/2⌋ doubles.
/// `diag_len`/`offdiag_len` are the capacities in doubles.
///
/// # Safety
/// `handle` must be a live sampler handle; the output slices must point to
/// writable memory of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn xvol_sampler_next(
    handle: *mut XvolSampler,
    diag: *mut f64,
    diag_len: usize,
    offdiag: *mut f64,
    offdiag_len: usize,
) -> XvolStatus {
    guarded(|| {
        if handle.is_null() || diag.is_null() || offdiag.is_null() {
            return XvolStatus::NullPointer;
        }
        let sampler_ref = unsafe { &mut *handle };
        let needed_diag = sampler_ref.dims.product();
        let needed_off = 2 * sampler_ref.dims.pair_count();
        if diag_len < needed_diag || offdiag_len < needed_off {
            return XvolStatus::BufferTooSmall;
        }
        let state = sampler::sample_state(sampler_ref.dims, &mut sampler_ref.rng);
        unsafe {
            std::ptr::copy_nonoverlapping(state.diag().as_ptr(), diag, needed_diag);
            for (t, z) in state.offdiag().iter().enumerate() {
                *offdiag.add(2 * t) = z.re;
                *offdiag.add(2 * t + 1) = z.im;
            }
        }
        XvolStatus::Ok
    })
}

/// Runs a Monte Carlo estimate of the PPT fraction. `workers` threads are
/// used; the result is bit-identical for any worker count.
///
/// # Safety
/// `out` must be NULL or point to a writable [`XvolEstimate`].
#[no_mangle]
pub unsafe extern "C" fn xvol_estimate(
    m: u32,
    n: u32,
    samples: u64,
    seed: u64,
    method: XvolMethod,
    workers: u32,
    out: *mut XvolEstimate,
) -> XvolStatus {
    guarded(|| {
        if out.is_null() {
            return XvolStatus::NullPointer;
        }
        if workers == 0 {
            return XvolStatus::InvalidArgument;
        }
        let dims = match Dims::new(m, n) {
            Ok(d) => d,
            Err(e) => return status_of(&e),
        };
        let cfg = match sampler::SampleConfig::new(dims, seed, samples) {
            Ok(c) => c,
            Err(e) => return status_of(&e),
        };
        let rust_method = match method {
            XvolMethod::Naive => Method::Naive,
            XvolMethod::RaoBlackwell => Method::RaoBlackwell,
        };
        let pool = match rayon::ThreadPoolBuilder::new()
            .num_threads(workers as usize)
            .build()
        {
            Ok(p) => p,
            Err(_) => return XvolStatus::InternalError,
        };
        match pool.install(|| montecarlo::estimate(&cfg, rust_method)) {
            Ok(e) => {
                unsafe {
                    *out = XvolEstimate {
                        mean: e.mean,
                        std_error: e.std_error,
                        analytic: e.analytic_value,
                        z_score: e.z_score,
                        count: e.count,
                        seed: e.seed,
                    };
                }
                XvolStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xvol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
