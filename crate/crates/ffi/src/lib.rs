//! C ABI for `sqsynth`.
//!
//! Every object crosses the boundary as an opaque handle owned by the caller
//! and released with its `*_free` function. Fallible calls return an
//! [`SqStatus`]; on failure `sq_last_error` describes the problem for the
//! calling thread. Panics are caught and reported as `SQ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use sqsynth::io::DecompositionFile;
use sqsynth::synth::{self, Interpolation, LutConfig};
use sqsynth::{deconstruct, BasisFunction, DeconstructOptions, Decomposition, Error, PolarSpectrum, RenderConfig, SampledFrame};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonFiniteInput = 3,
    BadLength = 4,
    NyquistEnergy = 5,
    Nonadmissible = 6,
    TooManyTerms = 7,
    WrongBasisKind = 8,
    BufferTooSmall = 9,
    Format = 10,
    Io = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqEngine {
    Naive = 0,
    Differential = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqInterpolation {
    Nearest = 0,
    Linear = 1,
}

/// Render settings. A `filter_cutoff` of zero or below disables the
/// low-pass filter.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SqRenderConfig {
    pub samples_per_period: usize,
    pub periods: usize,
    pub oversample: usize,
    pub filter_cutoff: f64,
    pub decimate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SqStats {
    pub adds: u64,
    pub multiplies: u64,
    pub table_reads: u64,
    pub interpolations: u64,
    pub sign_flips: u64,
    pub samples_rendered: u64,
}

/// A polar spectrum of one period.
pub struct SqSpectrum(PolarSpectrum);

pub struct SqBasis(BasisFunction);

pub struct SqDecomposition(Decomposition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SqStatus {
    match err {
        Error::NonFiniteInput => SqStatus::NonFiniteInput,
        Error::OddLength(_) | Error::TooShort(_) | Error::TooFewSamples { .. } | Error::NotPowerOfTwo(_) => {
            SqStatus::BadLength
        }
        Error::NyquistEnergy { .. } => SqStatus::NyquistEnergy,
        Error::NonadmissibleFundamental { .. } | Error::NonadmissibleBasis { .. } | Error::ZeroFunction => {
            SqStatus::Nonadmissible
        }
        Error::TooManyTerms { .. } => SqStatus::TooManyTerms,
        Error::WrongBasisKind(_) => SqStatus::WrongBasisKind,
        Error::FileFormat(_) => SqStatus::Format,
        Error::Io(_) => SqStatus::Io,
        Error::UnsupportedMode { .. } | Error::BadLutSize(_) | Error::InvalidConfig(_) | Error::BadParams(_) => {
            SqStatus::InvalidArgument
        }
    }
}

enum Failure {
    Status(SqStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(SqStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SqStatus::Ok,
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
            SqStatus::Panic
        }
    }
}

unsafe fn input<'a>(data: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if data.is_null() {
        return Err(null("sample buffer"));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Analyzes one period of `len` samples.
///
/// # Safety
/// `samples` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_analyze(samples: *const f64, len: usize, out: *mut *mut SqSpectrum) -> SqStatus {
    guard(|| {
        let frame = SampledFrame::new(input(samples, len)?.to_vec())?;
        emit(out, SqSpectrum(sqsynth::spectrum::analyze_frame(&frame)?))
    })
}

/// Builds a spectrum from a constant and `count` (module, phase) pairs for
/// harmonics 1..=count.
///
/// # Safety
/// `modules` and `phases` must each point to `count` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_new(
    c0: f64,
    modules: *const f64,
    phases: *const f64,
    count: usize,
    out: *mut *mut SqSpectrum,
) -> SqStatus {
    guard(|| {
        let m = input(modules, count)?;
        let p = input(phases, count)?;
        if !c0.is_finite() || m.iter().chain(p).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput.into());
        }
        let bins = m.iter().zip(p).map(|(&m, &p)| sqsynth::PolarBin::new(m, p)).collect();
        emit(out, SqSpectrum(PolarSpectrum::new(c0, bins)))
    })
}

/// # Safety
/// `spec` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_harmonic_count(spec: *const SqSpectrum) -> usize {
    spec.as_ref().map_or(0, |s| s.0.harmonic_count())
}

/// # Safety
/// `spec` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_c0(spec: *const SqSpectrum) -> f64 {
    spec.as_ref().map_or(f64::NAN, |s| s.0.c0)
}

/// Reads harmonic `k` (1-based). Harmonics beyond the stored range are zero.
///
/// # Safety
/// `spec` must be a live handle; `module` and `phase` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_bin(spec: *const SqSpectrum, k: usize, module: *mut f64, phase: *mut f64) -> SqStatus {
    guard(|| {
        let s = handle(spec, "spectrum")?;
        if module.is_null() || phase.is_null() {
            return Err(null("output value"));
        }
        if k == 0 {
            return Err(Failure::Status(SqStatus::InvalidArgument, "harmonic index starts at 1".into()));
        }
        let b = s.0.bin(k);
        *module = b.module;
        *phase = b.phase;
        Ok(())
    })
}

/// Synthesizes one period of `len` samples into `out`.
///
/// # Safety
/// `spec` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_synthesize(spec: *const SqSpectrum, out: *mut f64, len: usize) -> SqStatus {
    guard(|| {
        let s = handle(spec, "spectrum")?;
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let frame = sqsynth::spectrum::synthesize_frame(&s.0, len)?;
        slice::from_raw_parts_mut(out, len).copy_from_slice(frame.samples());
        Ok(())
    })
}

/// # Safety
/// `spec` must be a handle from this library or NULL; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sq_spectrum_free(spec: *mut SqSpectrum) {
    release(spec)
}

/// The analytic square wave, truncated at `harmonic_budget` harmonics.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_basis_square(harmonic_budget: usize, out: *mut *mut SqBasis) -> SqStatus {
    guard(|| emit(out, SqBasis(BasisFunction::square(harmonic_budget)?)))
}

/// The two-level square wave as sampled on a grid of `len` points.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_basis_sampled_square(len: usize, out: *mut *mut SqBasis) -> SqStatus {
    guard(|| emit(out, SqBasis(BasisFunction::sampled_square(len)?)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_basis_sine(out: *mut *mut SqBasis) -> SqStatus {
    guard(|| emit(out, SqBasis(BasisFunction::sine())))
}

/// A tabulated basis from one period of samples. The mean is removed.
///
/// # Safety
/// `name` must be a NUL-terminated string, `samples` must point to `len`
/// readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_basis_from_samples(
    name: *const c_char,
    samples: *const f64,
    len: usize,
    out: *mut *mut SqBasis,
) -> SqStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name).to_string_lossy().into_owned();
        let frame = SampledFrame::new(input(samples, len)?.to_vec())?;
        emit(out, SqBasis(BasisFunction::from_samples(name, &frame)?))
    })
}

/// Admissibility margin `s_1² − Σ_{p≥2} s_p²`; NaN for a NULL handle.
///
/// # Safety
/// `basis` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_basis_margin(basis: *const SqBasis) -> f64 {
    basis.as_ref().map_or(f64::NAN, |b| b.0.margin())
}

/// # Safety
/// `basis` must be a handle from this library or NULL; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sq_basis_free(basis: *mut SqBasis) {
    release(basis)
}

/// Deconstructs `spec` onto `basis`, solving up to `max_terms` terms and
/// stopping early once the residual norm drops to `rms_eps` (when positive).
///
/// # Safety
/// `spec` and `basis` must be live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_deconstruct(
    spec: *const SqSpectrum,
    basis: *const SqBasis,
    max_terms: usize,
    rms_eps: f64,
    strict: bool,
    out: *mut *mut SqDecomposition,
) -> SqStatus {
    guard(|| {
        let s = handle(spec, "spectrum")?;
        let b = handle(basis, "basis")?;
        let opts = DeconstructOptions {
            max_terms,
            rms_eps,
            strict,
        };
        emit(out, SqDecomposition(deconstruct(&s.0, &b.0, &opts)?))
    })
}

/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_term_count(d: *const SqDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.0.terms.len())
}

/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_c0(d: *const SqDecomposition) -> f64 {
    d.as_ref().map_or(f64::NAN, |d| d.0.c0)
}

/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_converged(d: *const SqDecomposition) -> bool {
    d.as_ref().is_some_and(|d| d.0.converged)
}

/// Reads term `index` (0-based) as its frequency multiple, module and phase.
///
/// # Safety
/// `d` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_term(
    d: *const SqDecomposition,
    index: usize,
    n: *mut usize,
    module: *mut f64,
    phase: *mut f64,
) -> SqStatus {
    guard(|| {
        let d = handle(d, "decomposition")?;
        if n.is_null() || module.is_null() || phase.is_null() {
            return Err(null("output value"));
        }
        let t = d.0.terms.get(index).ok_or_else(|| {
            Failure::Status(SqStatus::InvalidArgument, format!("term {index} out of range"))
        })?;
        *n = t.n;
        *module = t.module;
        *phase = t.phase;
        Ok(())
    })
}

/// Number of residual trace entries, one more than the term count.
///
/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_trace_len(d: *const SqDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.0.residual_trace.len())
}

/// Copies the residual trace into `out`, which must hold
/// `sq_decomposition_trace_len` entries.
///
/// # Safety
/// `d` must be a live handle and `out` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_trace(d: *const SqDecomposition, out: *mut f64, capacity: usize) -> SqStatus {
    guard(|| {
        let d = handle(d, "decomposition")?;
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let trace = &d.0.residual_trace;
        if capacity < trace.len() {
            return Err(Failure::Status(
                SqStatus::BufferTooSmall,
                format!("trace needs {} entries, buffer holds {capacity}", trace.len()),
            ));
        }
        slice::from_raw_parts_mut(out, trace.len()).copy_from_slice(trace);
        Ok(())
    })
}

/// Serializes to the decomposition file format. Release the string with
/// `sq_string_free`.
///
/// # Safety
/// `d` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_to_json(d: *const SqDecomposition, out: *mut *mut c_char) -> SqStatus {
    guard(|| {
        let d = handle(d, "decomposition")?;
        if out.is_null() {
            return Err(null("output string"));
        }
        let json = DecompositionFile::from_decomposition(&d.0).to_json();
        *out = CString::new(json).expect("JSON has no NUL bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_from_json(json: *const c_char, out: *mut *mut SqDecomposition) -> SqStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Error::FileFormat("decomposition text is not UTF-8".into()))?;
        let d = DecompositionFile::from_json(text)?.into_decomposition()?;
        emit(out, SqDecomposition(d))
    })
}

/// Spectrum of the decomposition's reconstruction over `bins` harmonics.
///
/// # Safety
/// `d` and `basis` must be live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_spectrum(
    d: *const SqDecomposition,
    basis: *const SqBasis,
    bins: usize,
    out: *mut *mut SqSpectrum,
) -> SqStatus {
    guard(|| {
        let d = handle(d, "decomposition")?;
        let b = handle(basis, "basis")?;
        emit(out, SqSpectrum(sqsynth::deconstruct::reconstruct_spectrum(&d.0, &b.0, bins)))
    })
}

/// # Safety
/// `d` must be a handle from this library or NULL; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sq_decomposition_free(d: *mut SqDecomposition) {
    release(d)
}

/// # Safety
/// `s` must be a string returned by this library or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn render_config(cfg: &SqRenderConfig) -> RenderConfig {
    RenderConfig {
        samples_per_period: cfg.samples_per_period,
        periods: cfg.periods,
        oversample: cfg.oversample,
        filter_cutoff: (cfg.filter_cutoff > 0.0).then_some(cfg.filter_cutoff),
        decimate: cfg.decimate,
    }
}

/// Number of samples a render with `cfg` produces.
///
/// # Safety
/// `cfg` and `len` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sq_render_len(cfg: *const SqRenderConfig, len: *mut usize) -> SqStatus {
    guard(|| {
        let cfg = render_config(handle(cfg, "render config")?);
        if len.is_null() {
            return Err(null("output length"));
        }
        cfg.validate()?;
        *len = cfg.output_rate() * cfg.periods;
        Ok(())
    })
}

unsafe fn deliver(
    render: synth::Render,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
    stats: *mut SqStats,
) -> Result<(), Failure> {
    if render.samples.len() > capacity {
        return Err(Failure::Status(
            SqStatus::BufferTooSmall,
            format!("render needs {} samples, buffer holds {capacity}", render.samples.len()),
        ));
    }
    slice::from_raw_parts_mut(out, render.samples.len()).copy_from_slice(&render.samples);
    if let Some(w) = written.as_mut() {
        *w = render.samples.len();
    }
    if let Some(s) = stats.as_mut() {
        let r = render.stats;
        *s = SqStats {
            adds: r.adds,
            multiplies: r.multiplies,
            table_reads: r.table_reads,
            interpolations: r.interpolations,
            sign_flips: r.sign_flips,
            samples_rendered: r.samples_rendered,
        };
    }
    Ok(())
}

/// Renders a square-wave decomposition with the naive or differential engine.
/// `written` and `stats` may be NULL.
///
/// # Safety
/// `d` must be a live handle, `cfg` a valid pointer and `out` must point to
/// `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sq_render_squares(
    d: *const SqDecomposition,
    engine: SqEngine,
    cfg: *const SqRenderConfig,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
    stats: *mut SqStats,
) -> SqStatus {
    guard(|| {
        let d = handle(d, "decomposition")?;
        let cfg = render_config(handle(cfg, "render config")?);
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let render = match engine {
            SqEngine::Naive => synth::render_naive(&d.0, &cfg)?,
            SqEngine::Differential => synth::render_differential(&d.0, &cfg)?,
        };
        deliver(render, out, capacity, written, stats)
    })
}

/// Renders a spectrum with the wavetable oscillator bank.
///
/// # Safety
/// As for `sq_render_squares`, with `spec` a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn sq_render_fourier(
    spec: *const SqSpectrum,
    cfg: *const SqRenderConfig,
    lut_size: usize,
    interpolation: SqInterpolation,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
    stats: *mut SqStats,
) -> SqStatus {
    guard(|| {
        let s = handle(spec, "spectrum")?;
        let cfg = render_config(handle(cfg, "render config")?);
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let lut = LutConfig {
            size: lut_size,
            interpolation: match interpolation {
                SqInterpolation::Nearest => Interpolation::Nearest,
                SqInterpolation::Linear => Interpolation::Linear,
            },
        };
        let render = synth::render_fourier(&s.0, &cfg, &lut)?;
        deliver(render, out, capacity, written, stats)
    })
}
