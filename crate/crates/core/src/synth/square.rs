//! Square-wave engines.
//!
//! Each nonzero term becomes an oscillator with an exact integer phase:
//! position `(n·i·D + w) mod R` with `R = rate·D`, so the sign at every
//! sample is decided in integer arithmetic and both engines agree on it.
//! Amplitudes are quantized once to a shared power-of-two fixed-point
//! scale; accumulating them is exact, which makes the differential engine
//! reproduce the naive one bit for bit.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use super::{EngineStats, Render, RenderConfig};
use crate::deconstruct::Decomposition;
use crate::error::{Error, Result};

/// Sub-sample phase resolution, `D = 2^PHASE_BITS` steps per sample.
const PHASE_BITS: u32 = 24;

struct Oscillator {
    /// Phase advance per sample, in units of `1/R` cycles.
    step: u128,
    /// Phase at sample 0.
    offset: u128,
    amplitude: i64,
}

struct OscillatorBank {
    oscillators: Vec<Oscillator>,
    resolution: u128,
    rate: u128,
    inv_scale: f64,
    c0: f64,
}

impl OscillatorBank {
    fn new(decomp: &Decomposition, rate: usize) -> Result<Self> {
        if !decomp.basis_kind.is_two_level() {
            return Err(Error::WrongBasisKind(decomp.basis_name.clone()));
        }
        let rate = rate as u128;
        let resolution = rate << PHASE_BITS;
        let active: Vec<_> = decomp.nonzero_terms().collect();
        let total: f64 = active.iter().map(|t| t.module.abs()).sum();
        // Σ|q_n| stays below 2^61, so ±2·q_n flips never overflow.
        let exponent = if total > 0.0 {
            (61 - total.log2().ceil() as i32 - 1).clamp(-1000, 1000)
        } else {
            0
        };
        let scale = 2f64.powi(exponent);
        let oscillators = active
            .iter()
            .map(|t| {
                let cycles = t.phase / (2.0 * PI);
                let frac = cycles - cycles.floor();
                let offset = (frac * resolution as f64).round() as u128 % resolution;
                Oscillator {
                    step: ((t.n as u128) << PHASE_BITS) % resolution,
                    offset,
                    amplitude: (t.module * scale).round() as i64,
                }
            })
            .collect();
        Ok(Self {
            oscillators,
            resolution,
            rate,
            inv_scale: 2f64.powi(-exponent),
            c0: decomp.c0,
        })
    }

    fn position(&self, osc: &Oscillator, sample: u64) -> u128 {
        let i = sample as u128 % self.rate;
        (osc.step * i + osc.offset) % self.resolution
    }

    fn positive(&self, osc: &Oscillator, sample: u64) -> bool {
        2 * self.position(osc, sample) < self.resolution
    }

    fn signed(&self, osc: &Oscillator, sample: u64) -> i64 {
        if self.positive(osc, sample) {
            osc.amplitude
        } else {
            -osc.amplitude
        }
    }

    /// First sample after `sample` at which the phase reaches the next
    /// half-cycle boundary.
    fn next_edge(&self, osc: &Oscillator, sample: u64) -> Option<u64> {
        if osc.step == 0 {
            return None;
        }
        let pos = self.position(osc, sample);
        let half = self.resolution / 2;
        let boundary = if pos < half { half } else { self.resolution };
        let steps = (boundary - pos).div_ceil(osc.step);
        Some(sample + steps as u64)
    }

    fn output(&self, acc: i64) -> f64 {
        self.c0 + acc as f64 * self.inv_scale
    }
}

/// Sums every oscillator at every sample.
pub fn render_naive(decomp: &Decomposition, cfg: &RenderConfig) -> Result<Render> {
    cfg.validate()?;
    let bank = OscillatorBank::new(decomp, cfg.render_rate())?;
    let total = cfg.total_samples() as u64;
    let mut raw = Vec::with_capacity(total as usize);
    for i in 0..total {
        let acc: i64 = bank.oscillators.iter().map(|o| bank.signed(o, i)).sum();
        raw.push(bank.output(acc));
    }
    let stats = EngineStats {
        adds: bank.oscillators.len() as u64 * total,
        samples_rendered: total,
        ..EngineStats::default()
    };
    Ok(Render {
        samples: cfg.finish(raw)?,
        stats,
    })
}

/// Holds the output and updates it by `±2·M_n` only when oscillator `n`
/// changes sign.
pub fn render_differential(decomp: &Decomposition, cfg: &RenderConfig) -> Result<Render> {
    cfg.validate()?;
    let bank = OscillatorBank::new(decomp, cfg.render_rate())?;
    let total = cfg.total_samples() as u64;
    let mut stats = EngineStats {
        samples_rendered: total,
        ..EngineStats::default()
    };

    // Time runs one period ahead so the state can start at sample -1, the
    // periodic predecessor of sample 0; a flip landing on sample 0 is then
    // counted like any other and every period sees exactly Σ 2n flips.
    let base = bank.rate as u64;
    let start = base - 1;
    let mut positive: Vec<bool> = bank.oscillators.iter().map(|o| bank.positive(o, start)).collect();
    let mut acc: i64 = 0;
    let mut events = BinaryHeap::new();
    for (idx, osc) in bank.oscillators.iter().enumerate() {
        acc += bank.signed(osc, start);
        stats.adds += 1;
        if let Some(at) = bank.next_edge(osc, start) {
            events.push(Reverse((at, idx)));
        }
    }

    let mut raw = Vec::with_capacity(total as usize);
    for j in base..base + total {
        while let Some(&Reverse((at, idx))) = events.peek() {
            if at != j {
                break;
            }
            events.pop();
            let osc = &bank.oscillators[idx];
            let now = bank.positive(osc, j);
            // a step of more than half a cycle can cross two edges at once
            if now != positive[idx] {
                positive[idx] = now;
                acc += if now { 2 * osc.amplitude } else { -2 * osc.amplitude };
                stats.adds += 1;
                stats.sign_flips += 1;
            }
            if let Some(next) = bank.next_edge(osc, j) {
                events.push(Reverse((next, idx)));
            }
        }
        raw.push(bank.output(acc));
    }
    Ok(Render {
        samples: cfg.finish(raw)?,
        stats,
    })
}
