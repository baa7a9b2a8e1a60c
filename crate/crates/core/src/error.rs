use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains non-finite samples")]
    NonFiniteInput,
    #[error("frame length {0} is odd; one period must be sampled on an even grid")]
    OddLength(usize),
    #[error("frame length {0} is below the minimum of 4 samples")]
    TooShort(usize),
    #[error("frame carries {ratio:.3e} of its energy in the Nyquist bin")]
    NyquistEnergy { ratio: f64 },
    #[error("{bins} harmonic bins need at least {needed} samples per period, got {samples}")]
    TooFewSamples {
        bins: usize,
        samples: usize,
        needed: usize,
    },
    #[error("basis function is identically zero after mean removal")]
    ZeroFunction,
    #[error("evaluation mode {mode} is not supported for {kind} bases")]
    UnsupportedMode { mode: &'static str, kind: &'static str },
    #[error("basis fundamental s_1 = {s1:.3e} is too small to solve for a module")]
    NonadmissibleFundamental { s1: f64 },
    #[error("basis admissibility margin {margin:.6} is not positive")]
    NonadmissibleBasis { margin: f64 },
    #[error("requested {requested} terms but the spectrum only has {available} bins")]
    TooManyTerms { requested: usize, available: usize },
    #[error("engine requires a square-wave decomposition, got basis `{0}`")]
    WrongBasisKind(String),
    #[error("lookup table size {0} must be a power of two and at least 4")]
    BadLutSize(usize),
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid render configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("file format error: {0}")]
    FileFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
