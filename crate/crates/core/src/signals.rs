//! Test-signal sources for the CLI and the test suites.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::square_wave;
use crate::error::{Error, Result};
use crate::spectrum::{PolarBin, PolarSpectrum};

pub fn sine(len: usize, amplitude: f64) -> Vec<f64> {
    (0..len)
        .map(|i| amplitude * (2.0 * PI * i as f64 / len as f64).sin())
        .collect()
}

/// ±amplitude square, positive on the first half period.
pub fn square(len: usize, amplitude: f64) -> Vec<f64> {
    (0..len)
        .map(|i| amplitude * square_wave(i as f64 / len as f64))
        .collect()
}

/// Random sum of `components` harmonics whose highest is `top`; the other
/// harmonic numbers are drawn without replacement from `1..top`.
pub fn multiharmonic_spectrum(seed: u64, components: usize, top: usize) -> Result<PolarSpectrum> {
    if components == 0 || top < components {
        return Err(Error::BadParams(format!(
            "{components} components cannot fit below harmonic {top}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ks: Vec<usize> = sample(&mut rng, top - 1, components - 1)
        .into_iter()
        .map(|k| k + 1)
        .collect();
    ks.push(top);
    ks.sort_unstable();
    let mut bins = vec![PolarBin::ZERO; top];
    for k in ks {
        let module = rng.gen_range(0.2..=1.0);
        let phase = rng.gen_range(-PI..PI);
        bins[k - 1] = PolarBin::new(module, phase);
    }
    Ok(PolarSpectrum::new(0.0, bins))
}

/// Rescales so the largest |sample| equals `peak`.
pub fn normalize_peak(samples: &mut [f64], peak: f64) {
    let max = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max > 0.0 {
        let s = peak / max;
        samples.iter_mut().for_each(|x| *x *= s);
    }
}

/// Repeats one period `periods` times.
pub fn repeat(period: &[f64], periods: usize) -> Vec<f64> {
    period.iter().copied().cycle().take(period.len() * periods).collect()
}
