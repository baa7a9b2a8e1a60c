//! Basis functions `S(x)`: zero-mean periodic waves described by their own
//! polar spectrum `Σ_p s_p cos(p·x + φ_p)`.
//!
//! A basis is admissible when its fundamental carries more energy than all
//! higher harmonics together, `s_1² > Σ_{p≥2} s_p²`. The difference is kept
//! as the basis [`margin`](BasisFunction::margin).

use std::f64::consts::{FRAC_PI_2, PI};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{self, PolarBin, PolarSpectrum, SampledFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Two-level ±1 square with its continuous Fourier series `4/(πp)`.
    Square,
    /// Two-level ±1 square sampled on a fixed grid; its spectrum is the
    /// DFT of the samples rather than the continuous series.
    SampledSquare,
    Sine,
    Tabulated,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Square => "analytic-square",
            BasisKind::SampledSquare => "sampled-square",
            BasisKind::Sine => "analytic-sine",
            BasisKind::Tabulated => "tabulated",
        }
    }

    /// Bases the square-wave engines can render directly.
    pub fn is_two_level(self) -> bool {
        matches!(self, BasisKind::Square | BasisKind::SampledSquare)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Exact wave shape: sign function for squares, `sin` for the sine.
    ClosedForm,
    /// Linear interpolation on the stored table.
    Interpolated,
    /// Sum of the stored spectrum, band-limited to the grid.
    Series,
}

impl EvalMode {
    fn as_str(self) -> &'static str {
        match self {
            EvalMode::ClosedForm => "closed-form",
            EvalMode::Interpolated => "interpolated",
            EvalMode::Series => "series",
        }
    }
}

/// Canonical name of the grid-sampled square basis for a period of `len`.
pub fn sampled_square_name(len: usize) -> String {
    format!("square-grid:{len}")
}

/// Two-level wave for a phase given in cycles: +1 on `[0, ½)`, −1 on `[½, 1)`.
pub fn square_wave(cycles: f64) -> f64 {
    let mut f = cycles - cycles.floor();
    if f >= 1.0 {
        f = 0.0;
    }
    if f < 0.5 {
        1.0
    } else {
        -1.0
    }
}

/// Phase in cycles of `k·x_i + theta` on a grid of `len`, with the integer
/// part of `k·i/len` removed exactly.
fn grid_cycles(k: usize, i: usize, len: usize, theta: f64) -> f64 {
    let whole = (k as u128 * i as u128 % len as u128) as f64;
    whole / len as f64 + theta / (2.0 * PI)
}

#[derive(Debug, Clone)]
pub struct BasisFunction {
    name: String,
    kind: BasisKind,
    table: Option<SampledFrame>,
    spectrum: PolarSpectrum,
    harmonic_budget: usize,
    margin: f64,
}

impl BasisFunction {
    /// Analytic square wave keeping harmonics `p ≤ harmonic_budget`.
    pub fn square(harmonic_budget: usize) -> Result<Self> {
        if harmonic_budget == 0 {
            return Err(Error::BadParams("square basis needs a harmonic budget ≥ 1".into()));
        }
        let bins = (1..=harmonic_budget)
            .map(|p| {
                if p % 2 == 1 {
                    PolarBin::new(4.0 / (PI * p as f64), -FRAC_PI_2)
                } else {
                    PolarBin::ZERO
                }
            })
            .collect();
        // s_1² − Σ_{odd p ≥ 3} s_p², each term 16/(π²p²)
        let scale = 16.0 / (PI * PI);
        let tail: f64 = (3..=harmonic_budget)
            .step_by(2)
            .map(|p| scale / (p as f64 * p as f64))
            .sum();
        Ok(Self {
            name: "square".into(),
            kind: BasisKind::Square,
            table: None,
            spectrum: PolarSpectrum::new(0.0, bins),
            harmonic_budget,
            margin: scale - tail,
        })
    }

    pub fn sine() -> Self {
        Self {
            name: "sine".into(),
            kind: BasisKind::Sine,
            table: None,
            spectrum: PolarSpectrum::new(0.0, vec![PolarBin::new(1.0, -FRAC_PI_2)]),
            harmonic_budget: 1,
            margin: 1.0,
        }
    }

    /// Tabulated basis from one period of samples; the mean is removed first.
    pub fn from_samples(name: impl Into<String>, frame: &SampledFrame) -> Result<Self> {
        let mean = frame.mean();
        let centered = SampledFrame::new(frame.samples().iter().map(|x| x - mean).collect())?;
        let scale = spectrum::norm(frame).max(1.0);
        if spectrum::norm(&centered) <= 1e-12 * scale {
            return Err(Error::ZeroFunction);
        }
        let analyzed = spectrum::analyze_frame(&centered)?;
        let spectrum = PolarSpectrum::new(0.0, analyzed.bins().to_vec());
        let margin = margin_of(&spectrum);
        Ok(Self {
            name: name.into(),
            kind: BasisKind::Tabulated,
            harmonic_budget: centered.max_harmonic(),
            table: Some(centered),
            spectrum,
            margin,
        })
    }

    /// The closed-form square sampled on a grid of `len` points.
    pub fn sampled_square(len: usize) -> Result<Self> {
        let frame = SampledFrame::new((0..len).map(|i| square_wave(i as f64 / len as f64)).collect())?;
        let mut basis = Self::from_samples(sampled_square_name(len), &frame)?;
        basis.kind = BasisKind::SampledSquare;
        Ok(basis)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn table(&self) -> Option<&SampledFrame> {
        self.table.as_ref()
    }

    pub fn spectrum(&self) -> &PolarSpectrum {
        &self.spectrum
    }

    pub fn harmonic_budget(&self) -> usize {
        self.harmonic_budget
    }

    /// `s_1² − Σ_{p≥2} s_p²`.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn is_admissible(&self) -> bool {
        self.margin > 0.0
    }

    pub fn fundamental(&self) -> PolarBin {
        self.spectrum.bin(1)
    }

    /// `s_p·e^{iφ_p}` for `p = 1..=harmonic_budget`, index `p − 1`.
    pub(crate) fn comb(&self) -> Vec<Complex64> {
        let mut comb = self.spectrum.to_complex();
        comb.resize(self.harmonic_budget, Complex64::new(0.0, 0.0));
        comb
    }

    /// Samples `S(k·x_i + theta)` on a grid of `len` points.
    pub fn eval(&self, k: usize, theta: f64, len: usize, mode: EvalMode) -> Result<SampledFrame> {
        if k == 0 {
            return Err(Error::BadParams("harmonic index starts at 1".into()));
        }
        let unsupported = || Error::UnsupportedMode {
            mode: mode.as_str(),
            kind: self.kind.as_str(),
        };
        match mode {
            EvalMode::ClosedForm => match self.kind {
                BasisKind::Square | BasisKind::SampledSquare => SampledFrame::new(
                    (0..len)
                        .map(|i| square_wave(grid_cycles(k, i, len, theta)))
                        .collect(),
                ),
                BasisKind::Sine => SampledFrame::new(
                    (0..len)
                        .map(|i| (2.0 * PI * grid_cycles(k, i, len, theta)).sin())
                        .collect(),
                ),
                BasisKind::Tabulated => Err(unsupported()),
            },
            EvalMode::Interpolated => {
                let table = self.table.as_ref().ok_or_else(unsupported)?;
                let t = table.samples();
                let size = t.len() as f64;
                SampledFrame::new(
                    (0..len)
                        .map(|i| {
                            let c = grid_cycles(k, i, len, theta);
                            let pos = (c - c.floor()) * size;
                            let j = (pos.floor() as usize).min(t.len() - 1);
                            let frac = pos - j as f64;
                            t[j] + frac * (t[(j + 1) % t.len()] - t[j])
                        })
                        .collect(),
                )
            }
            EvalMode::Series => {
                let top = (len / 2).saturating_sub(1);
                let mut bins = vec![PolarBin::ZERO; top];
                for p in 1..=self.harmonic_budget.min(top / k) {
                    let s = self.spectrum.bin(p);
                    bins[p * k - 1] = PolarBin::new(s.module, p as f64 * theta + s.phase);
                }
                spectrum::synthesize_frame(&PolarSpectrum::new(0.0, bins), len)
            }
        }
    }
}

/// Admissibility margin recomputed from the stored spectrum.
pub fn admissibility(basis: &BasisFunction) -> f64 {
    margin_of(&basis.spectrum)
}

fn margin_of(spec: &PolarSpectrum) -> f64 {
    let s1 = spec.bin(1).module;
    let rest: f64 = spec.bins().iter().skip(1).map(|b| b.module * b.module).sum();
    s1 * s1 - rest
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIMIT_MARGIN: f64 = 32.0 / (PI * PI) - 2.0;

    #[test]
    fn square_budget_one() {
        let b = BasisFunction::square(1).unwrap();
        assert!((b.fundamental().module - 1.273_239_5).abs() < 1e-7);
        assert!((b.fundamental().phase + FRAC_PI_2).abs() < 1e-15);
        assert!((b.margin() - 16.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn square_large_budget_approaches_limit() {
        let b = BasisFunction::square(10_000).unwrap();
        assert!((b.margin() - LIMIT_MARGIN).abs() < 1e-3);
        assert!(b.margin() > LIMIT_MARGIN);
        for p in (2..=10_000).step_by(2) {
            assert_eq!(b.spectrum().bin(p), PolarBin::ZERO);
        }
        assert!((admissibility(&b) - b.margin()).abs() < 1e-12);
    }

    #[test]
    fn square_margin_shrinks_with_budget() {
        let mut last = f64::INFINITY;
        for budget in [1, 2, 3, 5, 17, 64, 255, 1000] {
            let m = BasisFunction::square(budget).unwrap().margin();
            assert!(m <= last && m >= LIMIT_MARGIN);
            last = m;
        }
    }

    #[test]
    fn sine_basis() {
        let b = BasisFunction::sine();
        assert_eq!(b.margin(), 1.0);
        let frame = b.eval(1, FRAC_PI_2, 32, EvalMode::ClosedForm).unwrap();
        let cos = SampledFrame::from_fn(32, f64::cos).unwrap();
        for (a, c) in frame.samples().iter().zip(cos.samples()) {
            assert!((a - c).abs() < 1e-12);
        }
        let f = b.eval(3, PI, 64, EvalMode::ClosedForm).unwrap();
        let g = SampledFrame::from_fn(64, |x| -(3.0 * x).sin()).unwrap();
        for (a, c) in f.samples().iter().zip(g.samples()) {
            assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn tabulated_from_sine_matches_analytic() {
        let b = BasisFunction::from_samples("t", &SampledFrame::from_fn(64, f64::sin).unwrap()).unwrap();
        let s = BasisFunction::sine();
        assert_eq!(b.kind(), BasisKind::Tabulated);
        assert!((b.fundamental().module - s.fundamental().module).abs() < 1e-9);
        assert!((b.fundamental().phase - s.fundamental().phase).abs() < 1e-9);
        assert!(b.spectrum().bins()[1..].iter().all(|x| x.module < 1e-9));
        assert!((b.margin() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tabulated_square_margin() {
        let len = 4096;
        let frame = SampledFrame::new((0..len).map(|i| if 2 * i < len { 1.0 } else { -1.0 }).collect()).unwrap();
        let b = BasisFunction::from_samples("sq", &frame).unwrap();
        assert!((b.margin() - 1.2423).abs() < 2e-3);
    }

    #[test]
    fn cos2_is_not_admissible() {
        let b = BasisFunction::from_samples("cos2", &SampledFrame::from_fn(64, |x| (2.0 * x).cos()).unwrap()).unwrap();
        assert!(b.fundamental().module < 1e-12);
        assert!(!b.is_admissible());
        assert!((b.margin() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_function_rejected() {
        let flat = SampledFrame::new(vec![0.3; 16]).unwrap();
        assert!(matches!(BasisFunction::from_samples("c", &flat), Err(Error::ZeroFunction)));
    }

    #[test]
    fn square_closed_form_samples() {
        let b = BasisFunction::square(3).unwrap();
        let f = b.eval(1, 0.0, 8, EvalMode::ClosedForm).unwrap();
        assert_eq!(f.samples(), &[1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
        let g = b.eval(2, 0.0, 8, EvalMode::ClosedForm).unwrap();
        assert_eq!(g.samples(), &[1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn closed_form_unsupported_on_tables() {
        let b = BasisFunction::from_samples("t", &SampledFrame::from_fn(16, f64::sin).unwrap()).unwrap();
        assert!(matches!(b.eval(1, 0.0, 16, EvalMode::ClosedForm), Err(Error::UnsupportedMode { .. })));
        assert!(b.eval(1, 0.0, 16, EvalMode::Interpolated).is_ok());
        let sq = BasisFunction::square(3).unwrap();
        assert!(matches!(sq.eval(1, 0.0, 16, EvalMode::Interpolated), Err(Error::UnsupportedMode { .. })));
    }

    #[test]
    fn zero_mean_closed_form() {
        for len in [8, 64, 1000] {
            let b = BasisFunction::square(len / 2 - 1).unwrap();
            for k in 1..5 {
                let mean = b.eval(k, 0.3, len, EvalMode::ClosedForm).unwrap().mean();
                // sampled two-level wave: at most one unbalanced sample per half-cycle edge
                assert!(mean.abs() <= 2.0 * k as f64 / len as f64, "len {len} k {k}");
            }
            assert_eq!(b.eval(1, 0.0, len, EvalMode::ClosedForm).unwrap().mean(), 0.0);
            assert_eq!(b.spectrum().c0, 0.0);
        }
    }

    #[test]
    fn series_mode_matches_spectrum() {
        let table = SampledFrame::from_fn(128, |x| x.sin() + 0.3 * (2.0 * x + 0.4).cos() - 0.1 * (5.0 * x).sin()).unwrap();
        let b = BasisFunction::from_samples("mix", &table).unwrap();
        let series = b.eval(1, 0.0, 128, EvalMode::Series).unwrap();
        let again = spectrum::analyze_frame(&series).unwrap();
        for (x, y) in again.bins().iter().zip(b.spectrum().bins()) {
            assert!((x.to_complex() - y.to_complex()).norm() < 1e-9);
        }
        for (x, y) in series.samples().iter().zip(b.table().unwrap().samples()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn series_square_tracks_closed_form_in_norm() {
        let len = 2048;
        let b = BasisFunction::square(len / 2 - 1).unwrap();
        let series = b.eval(1, 0.0, len, EvalMode::Series).unwrap();
        let exact = b.eval(1, 0.0, len, EvalMode::ClosedForm).unwrap();
        let err: Vec<f64> = series.samples().iter().zip(exact.samples()).map(|(a, b)| a - b).collect();
        let rms = spectrum::norm(&SampledFrame::new(err).unwrap());
        // truncation tail Σ_{odd p > K} (4/πp)²/2 ≈ 4/(π²K), plus the discontinuity samples
        assert!(rms < 0.06, "rms {rms}");
    }

    #[test]
    fn sampled_square_is_grid_exact() {
        let b = BasisFunction::sampled_square(64).unwrap();
        assert_eq!(b.kind(), BasisKind::SampledSquare);
        assert_eq!(b.name(), "square-grid:64");
        let closed = b.eval(1, 0.0, 64, EvalMode::ClosedForm).unwrap();
        assert_eq!(closed.samples(), b.table().unwrap().samples());
        assert!(b.is_admissible());
    }
}
