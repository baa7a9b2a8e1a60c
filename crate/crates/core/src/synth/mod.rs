//! Rendering engines and post-processing.
//!
//! The square engines play square-basis decompositions with ±1 oscillators
//! and integer accumulators, so they never multiply. The Fourier engine is
//! the lookup-table reference they are measured against.

mod fourier;
mod haar;
mod lowpass;
mod square;

pub use fourier::{render_fourier, Interpolation, LutConfig};
pub use haar::{haar_approx, haar_function, HaarApprox};
pub use lowpass::rc_lowpass;
pub use square::{render_differential, render_naive};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    /// Samples per period of the base grid, `L`.
    pub samples_per_period: usize,
    pub periods: usize,
    /// Rendering runs at `L·oversample` samples per period.
    pub oversample: usize,
    /// Optional one-pole low-pass cutoff in cycles per period.
    pub filter_cutoff: Option<f64>,
    /// Keep every `oversample`-th sample after filtering.
    pub decimate: bool,
}

impl RenderConfig {
    pub fn new(samples_per_period: usize) -> Self {
        Self {
            samples_per_period,
            periods: 1,
            oversample: 1,
            filter_cutoff: None,
            decimate: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_period < 2 || !self.samples_per_period.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "samples per period must be even and ≥ 2, got {}",
                self.samples_per_period
            )));
        }
        if self.periods == 0 {
            return Err(Error::InvalidConfig("at least one period is required".into()));
        }
        if self.oversample == 0 {
            return Err(Error::InvalidConfig("oversample factor must be ≥ 1".into()));
        }
        if let Some(c) = self.filter_cutoff {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidConfig(format!("filter cutoff must be positive, got {c}")));
            }
        }
        Ok(())
    }

    /// Rendered samples per period, `L·oversample`.
    pub fn render_rate(&self) -> usize {
        self.samples_per_period * self.oversample
    }

    pub fn total_samples(&self) -> usize {
        self.render_rate() * self.periods
    }

    /// Samples per period of the delivered output.
    pub fn output_rate(&self) -> usize {
        if self.decimate {
            self.samples_per_period
        } else {
            self.render_rate()
        }
    }

    fn finish(&self, raw: Vec<f64>) -> Result<Vec<f64>> {
        let filtered = match self.filter_cutoff {
            Some(c) => rc_lowpass(&raw, c, self.render_rate())?,
            None => raw,
        };
        Ok(if self.decimate && self.oversample > 1 {
            filtered.into_iter().step_by(self.oversample).collect()
        } else {
            filtered
        })
    }
}

/// Operation counters for one render.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Output accumulations.
    pub adds: u64,
    /// Amplitude scalings.
    pub multiplies: u64,
    pub table_reads: u64,
    /// Interpolation steps between adjacent table entries, each one
    /// multiply and two adds inside the table read.
    pub interpolations: u64,
    pub sign_flips: u64,
    pub samples_rendered: u64,
}

impl EngineStats {
    pub fn adds_per_sample(&self) -> f64 {
        self.adds as f64 / self.samples_rendered.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Render {
    pub samples: Vec<f64>,
    pub stats: EngineStats,
}
