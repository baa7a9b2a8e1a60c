//! Lookup-table additive engine: one phase accumulator, one table read,
//! one multiply and one add per partial per sample.

use std::f64::consts::PI;

use super::{EngineStats, Render, RenderConfig};
use crate::error::{Error, Result};
use crate::spectrum::PolarSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Nearest,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LutConfig {
    pub size: usize,
    pub interpolation: Interpolation,
}

impl Default for LutConfig {
    fn default() -> Self {
        Self {
            size: 4096,
            interpolation: Interpolation::Linear,
        }
    }
}

struct Partial {
    amplitude: f64,
    phase: u64,
    increment: u64,
}

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

pub fn render_fourier(spec: &PolarSpectrum, cfg: &RenderConfig, lut: &LutConfig) -> Result<Render> {
    cfg.validate()?;
    if lut.size < 4 || !lut.size.is_power_of_two() || lut.size > 1 << 32 {
        return Err(Error::BadLutSize(lut.size));
    }
    let bits = lut.size.trailing_zeros();
    let shift = 64 - bits;
    let mask = lut.size as u64 - 1;
    let table: Vec<f64> = (0..lut.size)
        .map(|j| (2.0 * PI * j as f64 / lut.size as f64).cos())
        .collect();

    let rate = cfg.render_rate() as u128;
    let mut partials: Vec<Partial> = spec
        .bins()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.module > 0.0)
        .map(|(i, b)| {
            let k = (i + 1) as u128;
            let increment = (((k << 64) + rate / 2) / rate) as u64;
            let cycles = b.phase / (2.0 * PI);
            let frac = cycles - cycles.floor();
            Partial {
                amplitude: b.module,
                phase: ((frac * TWO_POW_64) as u128 % (1u128 << 64)) as u64,
                increment,
            }
        })
        .collect();

    let total = cfg.total_samples();
    let half = 1u64 << (shift - 1);
    let frac_mask = (1u64 << shift) - 1;
    let frac_scale = 1.0 / (1u64 << shift) as f64;
    let mut raw = Vec::with_capacity(total);
    for _ in 0..total {
        let mut acc = spec.c0;
        for p in partials.iter_mut() {
            let value = match lut.interpolation {
                Interpolation::Nearest => table[((p.phase.wrapping_add(half) >> shift) & mask) as usize],
                Interpolation::Linear => {
                    let j = (p.phase >> shift) as usize;
                    let frac = (p.phase & frac_mask) as f64 * frac_scale;
                    let a = table[j];
                    let b = table[(j + 1) & mask as usize];
                    a + frac * (b - a)
                }
            };
            acc += p.amplitude * value;
            p.phase = p.phase.wrapping_add(p.increment);
        }
        raw.push(acc);
    }

    let work = (partials.len() * total) as u64;
    let stats = EngineStats {
        adds: work,
        multiplies: work,
        table_reads: match lut.interpolation {
            Interpolation::Nearest => work,
            Interpolation::Linear => 2 * work,
        },
        interpolations: match lut.interpolation {
            Interpolation::Nearest => 0,
            Interpolation::Linear => work,
        },
        sign_flips: 0,
        samples_rendered: total as u64,
    };
    Ok(Render {
        samples: cfg.finish(raw)?,
        stats,
    })
}
