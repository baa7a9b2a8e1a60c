use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One-pole RC low-pass, `y[i] = y[i−1] + α·(x[i] − y[i−1])` with
/// `α = 1 − exp(−2π·cutoff/L)`.
///
/// The state starts at the mean of the first period and is run over that
/// period once before output begins, which puts a periodic input in steady
/// state. DC gain is 1.
pub fn rc_lowpass(signal: &[f64], cutoff: f64, samples_per_period: usize) -> Result<Vec<f64>> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidConfig(format!("cutoff must be positive, got {cutoff}")));
    }
    if samples_per_period == 0 {
        return Err(Error::InvalidConfig("samples per period must be positive".into()));
    }
    if signal.is_empty() {
        return Ok(Vec::new());
    }
    let alpha = 1.0 - (-2.0 * PI * cutoff / samples_per_period as f64).exp();
    let warm = &signal[..samples_per_period.min(signal.len())];
    let mut y = warm.iter().sum::<f64>() / warm.len() as f64;
    for &x in warm {
        y += alpha * (x - y);
    }
    Ok(signal
        .iter()
        .map(|&x| {
            y += alpha * (x - y);
            y
        })
        .collect())
}
