//! Oracles shared by the integration suites. Nothing here calls into the
//! transform code under test.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Direct O(L²) DFT in polar cos form: `(c0, [(m_k, θ_k)])` for k = 1..L/2-1.
pub fn direct_polar(samples: &[f64]) -> (f64, Vec<(f64, f64)>) {
    let len = samples.len();
    let c0 = samples.iter().sum::<f64>() / len as f64;
    let bins = (1..len / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, x) in samples.iter().enumerate() {
                let a = 2.0 * PI * ((k * i) % len) as f64 / len as f64;
                re += x * a.cos();
                im -= x * a.sin();
            }
            let (re, im) = (2.0 * re / len as f64, 2.0 * im / len as f64);
            (re.hypot(im), im.atan2(re))
        })
        .collect();
    (c0, bins)
}

/// Evaluates `c0 + Σ m_k cos(k x_i + θ_k)` on the grid directly.
pub fn direct_synth(c0: f64, bins: &[(f64, f64)], len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| {
            c0 + bins
                .iter()
                .enumerate()
                .map(|(k, &(m, th))| {
                    let k = k + 1;
                    m * (2.0 * PI * ((k * i) % len) as f64 / len as f64 + th).cos()
                })
                .sum::<f64>()
        })
        .collect()
}

pub fn rms(samples: &[f64]) -> f64 {
    (samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64).sqrt()
}

pub fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// ±1 square wave with value +1 on the first half cycle, from the
/// fractional part of `cycles`.
pub fn two_level(cycles: f64) -> f64 {
    if cycles - cycles.floor() < 0.5 {
        1.0
    } else {
        -1.0
    }
}
