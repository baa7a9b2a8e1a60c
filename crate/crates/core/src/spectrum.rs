//! One-period discrete Fourier analysis in the cosine-with-phase form.
//!
//! A frame holds exactly one period of a signal on the uniform grid
//! `x_i = 2π·i/L`, so harmonic `k` of the signal is DFT bin `k` and there is
//! no leakage. Spectra are stored as `c0 + Σ_k m_k cos(k·x + θ_k)`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Frames with more than this fraction of their energy in the Nyquist bin
/// are rejected: a phased cosine at Nyquist cannot be recovered from samples.
pub const NYQUIST_ENERGY_LIMIT: f64 = 1e-9;

/// Wraps a phase into `(−π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let y = phase.rem_euclid(two_pi);
    if y > PI {
        y - two_pi
    } else {
        y
    }
}

/// One period of a real signal sampled on an even uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFrame {
    samples: Vec<f64>,
}

impl SampledFrame {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let len = samples.len();
        if len < 4 {
            return Err(Error::TooShort(len));
        }
        if !len.is_multiple_of(2) {
            return Err(Error::OddLength(len));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { samples })
    }

    /// Samples `f(x_i)` for `x_i = 2π·i/len`.
    pub fn from_fn(len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let step = 2.0 * PI / len as f64;
        Self::new((0..len).map(|i| f(step * i as f64)).collect())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Largest harmonic representable without touching the Nyquist bin.
    pub fn max_harmonic(&self) -> usize {
        self.samples.len() / 2 - 1
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

/// Module and phase of one harmonic, `m·cos(k·x + θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarBin {
    pub module: f64,
    pub phase: f64,
}

impl PolarBin {
    pub const ZERO: PolarBin = PolarBin {
        module: 0.0,
        phase: 0.0,
    };

    /// Canonical form: nonnegative module, phase in `(−π, π]`, zero phase
    /// for a zero module.
    pub fn new(module: f64, phase: f64) -> Self {
        let (module, phase) = if module < 0.0 {
            (-module, phase + PI)
        } else {
            (module, phase)
        };
        if module == 0.0 {
            Self::ZERO
        } else {
            Self {
                module,
                phase: wrap_phase(phase),
            }
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let module = z.norm();
        if module == 0.0 {
            Self::ZERO
        } else {
            Self {
                module,
                phase: wrap_phase(z.arg()),
            }
        }
    }

    /// `m·e^{iθ}`; the signal contribution is `Re(z·e^{ikx})`.
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.module, self.phase)
    }
}

/// Rectangular coefficients of one harmonic, `a·sin(k·x) + b·cos(k·x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectBin {
    pub a: f64,
    pub b: f64,
}

/// DC term plus per-harmonic polar bins; `bins[k - 1]` is harmonic `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSpectrum {
    pub c0: f64,
    bins: Vec<PolarBin>,
}

impl PolarSpectrum {
    pub fn new(c0: f64, bins: Vec<PolarBin>) -> Self {
        let bins = bins
            .into_iter()
            .map(|b| PolarBin::new(b.module, b.phase))
            .collect();
        Self { c0, bins }
    }

    pub fn constant(c0: f64) -> Self {
        Self {
            c0,
            bins: Vec::new(),
        }
    }

    /// Builds a canonical spectrum from complex amplitudes, `bins[k - 1]`
    /// holding `m_k·e^{iθ_k}`.
    pub fn from_complex(c0: f64, bins: &[Complex64]) -> Self {
        Self {
            c0,
            bins: bins.iter().copied().map(PolarBin::from_complex).collect(),
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.bins.iter().map(|b| b.to_complex()).collect()
    }

    pub fn bins(&self) -> &[PolarBin] {
        &self.bins
    }

    /// Highest harmonic index `K`.
    pub fn harmonic_count(&self) -> usize {
        self.bins.len()
    }

    /// Harmonic `k` (1-based); zero beyond the stored range.
    pub fn bin(&self, k: usize) -> PolarBin {
        assert!(k >= 1, "harmonic index starts at 1");
        self.bins.get(k - 1).copied().unwrap_or(PolarBin::ZERO)
    }

    /// Returns a copy with exactly `count` bins, dropping or zero-padding.
    pub fn resized(&self, count: usize) -> Self {
        let mut bins = self.bins.clone();
        bins.resize(count, PolarBin::ZERO);
        Self { c0: self.c0, bins }
    }
}

fn forward_fft(samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Polar spectrum of one period, with `K = L/2 − 1` bins.
pub fn analyze_frame(frame: &SampledFrame) -> Result<PolarSpectrum> {
    let len = frame.len();
    let n = len as f64;
    let dft = forward_fft(frame.samples());

    let energy = frame.samples().iter().map(|x| x * x).sum::<f64>() / n;
    let nyquist = dft[len / 2].re / n;
    if energy > 0.0 && nyquist * nyquist > NYQUIST_ENERGY_LIMIT * energy {
        return Err(Error::NyquistEnergy {
            ratio: nyquist * nyquist / energy,
        });
    }

    let c0 = dft[0].re / n;
    let bins = dft[1..len / 2]
        .iter()
        .map(|&z| PolarBin::from_complex(z * (2.0 / n)))
        .collect();
    Ok(PolarSpectrum { c0, bins })
}

/// Samples `c0 + Σ m_k cos(k·x_i + θ_k)` on a grid of `len` points.
pub fn synthesize_frame(spec: &PolarSpectrum, len: usize) -> Result<SampledFrame> {
    let bins = spec.harmonic_count();
    let needed = (2 * bins + 2).max(4);
    if len < needed {
        return Err(Error::TooFewSamples {
            bins,
            samples: len,
            needed,
        });
    }
    if !len.is_multiple_of(2) {
        return Err(Error::OddLength(len));
    }
    let n = len as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    buf[0] = Complex64::new(spec.c0 * n, 0.0);
    for (k, bin) in spec.bins.iter().enumerate().map(|(i, b)| (i + 1, b)) {
        let z = bin.to_complex() * (n / 2.0);
        buf[k] = z;
        buf[len - k] = z.conj();
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    SampledFrame::new(buf.iter().map(|z| z.re / n).collect())
}

/// RMS over one period, `sqrt((1/L)·Σ x_i²)`.
pub fn norm(frame: &SampledFrame) -> f64 {
    let s = frame.samples();
    (s.iter().map(|x| x * x).sum::<f64>() / s.len() as f64).sqrt()
}

/// RMS computed from the spectrum, `sqrt(c0² + ½·Σ m_k²)`.
pub fn spectrum_norm(spec: &PolarSpectrum) -> f64 {
    let harmonic: f64 = spec.bins.iter().map(|b| b.module * b.module).sum();
    (spec.c0 * spec.c0 + 0.5 * harmonic).sqrt()
}

/// Same as [`spectrum_norm`] for bins held as complex amplitudes.
pub(crate) fn complex_norm(c0: f64, bins: &[Complex64]) -> f64 {
    let harmonic: f64 = bins.iter().map(|z| z.norm_sqr()).sum();
    (c0 * c0 + 0.5 * harmonic).sqrt()
}

pub fn polar_to_rect(spec: &PolarSpectrum) -> Vec<RectBin> {
    spec.bins
        .iter()
        .map(|b| RectBin {
            a: -b.module * b.phase.sin(),
            b: b.module * b.phase.cos(),
        })
        .collect()
}

pub fn rect_to_polar(c0: f64, bins: &[RectBin]) -> PolarSpectrum {
    let bins = bins
        .iter()
        .map(|r| {
            let module = r.a.hypot(r.b);
            if module == 0.0 {
                PolarBin::ZERO
            } else {
                PolarBin {
                    module,
                    phase: wrap_phase((-r.a).atan2(r.b)),
                }
            }
        })
        .collect();
    PolarSpectrum { c0, bins }
}
