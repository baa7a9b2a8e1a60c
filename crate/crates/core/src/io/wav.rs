use std::path::Path;

use crate::error::{Error, Result};

/// Peak level written files are normalized to, as a fraction of full scale.
pub const FULL_SCALE_PEAK: f64 = 0.9;

const PCM_MAX: f64 = i16::MAX as f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavInfo {
    pub sample_rate: u32,
    /// Factor applied to the float samples before conversion to full scale.
    pub scale: f64,
}

/// Writes 16-bit mono PCM with the largest |sample| mapped to 0.9 of full
/// scale. Returns the applied scale factor.
pub fn write_wav(path: &Path, samples: &[f64], sample_rate: u32) -> Result<WavInfo> {
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let peak = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if peak > 0.0 { FULL_SCALE_PEAK / peak } else { 1.0 };
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(wav_error)?;
    for &x in samples {
        writer
            .write_sample((x * scale * PCM_MAX).round() as i16)
            .map_err(wav_error)?;
    }
    writer.finalize().map_err(wav_error)?;
    Ok(WavInfo { sample_rate, scale })
}

/// Reads 16-bit PCM mono as floats in `[−1, 1]`.
pub fn read_wav(path: &Path) -> Result<(Vec<f64>, u32)> {
    let reader = hound::WavReader::open(path).map_err(wav_error)?;
    let spec = reader.spec();
    if spec.channels != 1 || spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
        return Err(Error::FileFormat(format!(
            "expected 16-bit PCM mono, got {} channel(s) at {} bits",
            spec.channels, spec.bits_per_sample
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / PCM_MAX))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(wav_error)?;
    Ok((samples, spec.sample_rate))
}

fn wav_error(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::FileFormat(other.to_string()),
    }
}
