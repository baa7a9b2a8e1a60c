use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::deconstruct::{Decomposition, Term};
use crate::error::{Error, Result};
use crate::spectrum::wrap_phase;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk decomposition:
/// `{format_version, basis, c0, eps, terms: [[n, M, Theta], ...], trace}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub format_version: u32,
    pub basis: String,
    pub c0: f64,
    pub eps: f64,
    pub terms: Vec<(usize, f64, f64)>,
    pub trace: Vec<f64>,
}

/// Recovers the engine-relevant kind from a stored basis name.
pub fn kind_from_name(name: &str) -> BasisKind {
    match name {
        "square" => BasisKind::Square,
        "sine" => BasisKind::Sine,
        n if n.starts_with("square-grid:") => BasisKind::SampledSquare,
        _ => BasisKind::Tabulated,
    }
}

impl DecompositionFile {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            basis: d.basis_name.clone(),
            c0: d.c0,
            eps: d.rms_eps,
            terms: d.terms.iter().map(|t| (t.n, t.module, t.phase)).collect(),
            trace: d.residual_trace.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FileFormat(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        for (i, &(n, m, theta)) in self.terms.iter().enumerate() {
            if n != i + 1 {
                return Err(Error::FileFormat(format!("term {} has n = {n}; terms must run 1, 2, 3, ...", i + 1)));
            }
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::FileFormat(format!("term {n} has invalid module {m}")));
            }
            if !theta.is_finite() || wrap_phase(theta) != theta {
                return Err(Error::FileFormat(format!("term {n} phase {theta} is outside (−π, π]")));
            }
        }
        if self.trace.is_empty() || self.trace.len() != self.terms.len() + 1 {
            return Err(Error::FileFormat(format!(
                "trace has {} entries for {} terms",
                self.trace.len(),
                self.terms.len()
            )));
        }
        Ok(())
    }

    pub fn into_decomposition(self) -> Result<Decomposition> {
        self.validate()?;
        let converged = *self.trace.last().unwrap() <= self.eps;
        Ok(Decomposition {
            c0: self.c0,
            basis_kind: kind_from_name(&self.basis),
            basis_name: self.basis,
            terms: self
                .terms
                .into_iter()
                .map(|(n, module, phase)| Term { n, module, phase })
                .collect(),
            residual_trace: self.trace,
            rms_eps: self.eps,
            converged,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::FileFormat(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
