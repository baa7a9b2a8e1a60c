//! Decomposition of sampled periodic signals onto scaled, phase-shifted,
//! frequency-multiplied copies of an arbitrary periodic basis function, and
//! square-wave additive synthesis engines to play the result back.
//!
//! The pipeline is:
//!
//! 1. [`spectrum::analyze_frame`] turns one period of samples into a polar
//!    spectrum `c0 + Σ m_k cos(kx + θ_k)`.
//! 2. [`deconstruct::deconstruct`] solves for the modules and phases
//!    `(M_n, Θ_n)` such that `c0 + Σ M_n S(nx + Θ_n)` has the same spectrum,
//!    working frequency by frequency on the residual.
//! 3. [`synth`] renders square-basis decompositions with a naive summing
//!    engine or an event-driven differential engine, and provides a
//!    lookup-table Fourier engine for comparison.

pub mod basis;
pub mod cli;
pub mod deconstruct;
pub mod error;
pub mod io;
pub mod signals;
pub mod spectrum;
pub mod synth;

pub use basis::{BasisFunction, BasisKind, EvalMode};
pub use deconstruct::{deconstruct, DeconstructOptions, Decomposition, Term};
pub use error::{Error, Result};
pub use spectrum::{PolarBin, PolarSpectrum, RectBin, SampledFrame};
pub use synth::{EngineStats, RenderConfig};
