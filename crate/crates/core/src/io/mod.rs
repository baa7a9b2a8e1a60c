//! File formats: 16-bit PCM mono WAV, one-sample-per-line CSV signals, the
//! `k,M,Theta` spectrum table and the JSON decomposition document.

mod decomposition;
mod table;
mod wav;

pub use decomposition::DecompositionFile;
pub use table::{read_signal_csv, read_spectrum_csv, write_signal_csv, write_spectrum_csv, write_trace_csv, SpectrumRow};
pub use wav::{read_wav, write_wav, WavInfo, FULL_SCALE_PEAK};

use std::path::Path;

use crate::error::Result;

/// Reads a signal from `.wav` or, for any other extension, CSV.
pub fn read_signal(path: &Path) -> Result<Vec<f64>> {
    if is_wav(path) {
        Ok(read_wav(path)?.0)
    } else {
        read_signal_csv(path)
    }
}

pub fn is_wav(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}
