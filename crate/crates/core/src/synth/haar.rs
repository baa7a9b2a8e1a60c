//! Truncated Haar projection, the wavelet baseline for the square engines.
//!
//! Functions are ordered coarse to fine: the constant, the mother wavelet,
//! then each dyadic scale left to right.

use crate::error::{Error, Result};
use crate::spectrum::{self, SampledFrame};

#[derive(Debug, Clone, PartialEq)]
pub struct HaarApprox {
    pub reconstruction: Vec<f64>,
    pub rms_error: f64,
}

/// (start, width, amplitude) of Haar function `index` on `len` samples;
/// width 0 marks the constant.
fn layout(index: usize, len: usize) -> (usize, usize, f64) {
    if index == 0 {
        return (0, 0, 1.0 / (len as f64).sqrt());
    }
    let scale = index.ilog2() as usize;
    let shift = index - (1 << scale);
    let width = len >> scale;
    (shift * width, width, ((1usize << scale) as f64 / len as f64).sqrt())
}

/// Haar function `index`, orthonormal under the plain dot product.
pub fn haar_function(index: usize, len: usize) -> Result<Vec<f64>> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    if index >= len {
        return Err(Error::BadParams(format!("Haar index {index} out of range for {len} samples")));
    }
    let (start, width, amp) = layout(index, len);
    if width == 0 {
        return Ok(vec![amp; len]);
    }
    let mut v = vec![0.0; len];
    v[start..start + width / 2].fill(amp);
    v[start + width / 2..start + width].fill(-amp);
    Ok(v)
}

/// Orthogonal projection of `target` onto the first `num_functions` Haar
/// functions.
pub fn haar_approx(target: &SampledFrame, num_functions: usize) -> Result<HaarApprox> {
    let len = target.len();
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    if num_functions > len {
        return Err(Error::BadParams(format!(
            "{num_functions} Haar functions requested for {len} samples"
        )));
    }
    let x = target.samples();
    let mut prefix = vec![0.0; len + 1];
    for (i, v) in x.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    let sum = |a: usize, b: usize| prefix[b] - prefix[a];

    let mut recon = vec![0.0; len];
    for index in 0..num_functions {
        let (start, width, amp) = layout(index, len);
        if width == 0 {
            let coeff = amp * sum(0, len);
            recon.iter_mut().for_each(|r| *r += coeff * amp);
            continue;
        }
        let mid = start + width / 2;
        let coeff = amp * (sum(start, mid) - sum(mid, start + width));
        let delta = coeff * amp;
        recon[start..mid].iter_mut().for_each(|r| *r += delta);
        recon[mid..start + width].iter_mut().for_each(|r| *r -= delta);
    }
    let err = SampledFrame::new(x.iter().zip(&recon).map(|(a, b)| a - b).collect())?;
    Ok(HaarApprox {
        rms_error: spectrum::norm(&err),
        reconstruction: recon,
    })
}
