//! Frequency-by-frequency deconstruction of a spectrum onto a basis.
//!
//! Step `n` reads residual bin `n` as `m_n·e^{iϑ_n}`, solves
//! `M_n = m_n / s_1` and `Θ_n = ϑ_n − φ_1`, then removes the whole harmonic
//! comb of `M_n·S(n·x + Θ_n)` from the residual: bin `p·n` loses
//! `M_n·s_p·e^{i(p·Θ_n + φ_p)}`. Later steps only touch bins above `n`, so
//! bins `1..=n` stay annihilated. Everything runs on spectra; the only
//! transform is the one that produced the input.

use rustfft::num_complex::Complex64;

use crate::basis::{BasisFunction, BasisKind};
use crate::error::{Error, Result};
use crate::spectrum::{self, wrap_phase, PolarSpectrum};

/// Residual bins at or below this magnitude yield a zero term.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub n: usize,
    pub module: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeconstructOptions {
    pub max_terms: usize,
    /// Stop once the residual norm falls to this value; 0 runs every term.
    pub rms_eps: f64,
    /// Reject bases with a nonpositive admissibility margin.
    pub strict: bool,
}

impl DeconstructOptions {
    pub fn terms(max_terms: usize) -> Self {
        Self {
            max_terms,
            rms_eps: 0.0,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub c0: f64,
    pub basis_name: String,
    pub basis_kind: BasisKind,
    pub terms: Vec<Term>,
    /// Entry `j` is the residual norm after `j` terms; entry 0 is the norm
    /// of the centered input.
    pub residual_trace: Vec<f64>,
    pub rms_eps: f64,
    pub converged: bool,
}

impl Decomposition {
    pub fn final_residual(&self) -> f64 {
        *self.residual_trace.last().expect("trace always has entry 0")
    }

    pub fn nonzero_terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(|t| t.module != 0.0)
    }

    /// The decomposition that stopping after `count` terms would have
    /// produced; the algorithm is prefix-stable.
    pub fn truncated(&self, count: usize) -> Self {
        let count = count.min(self.terms.len());
        let residual_trace = self.residual_trace[..=count].to_vec();
        let converged = *residual_trace.last().unwrap() <= self.rms_eps;
        Self {
            terms: self.terms[..count].to_vec(),
            residual_trace,
            converged,
            ..self.clone()
        }
    }

    /// Shortest prefix holding `count` nonzero terms, or everything.
    pub fn with_nonzero_terms(&self, count: usize) -> Self {
        if count == 0 {
            return self.truncated(0);
        }
        let mut seen = 0;
        for (i, t) in self.terms.iter().enumerate() {
            if t.module != 0.0 {
                seen += 1;
                if seen == count {
                    return self.truncated(i + 1);
                }
            }
        }
        self.clone()
    }
}

fn check_basis(basis: &BasisFunction, strict: bool) -> Result<Complex64> {
    if strict && basis.margin() <= 0.0 {
        return Err(Error::NonadmissibleBasis {
            margin: basis.margin(),
        });
    }
    let fundamental = basis.fundamental();
    if fundamental.module <= ZERO_TOL {
        return Err(Error::NonadmissibleFundamental {
            s1: fundamental.module,
        });
    }
    Ok(fundamental.to_complex())
}

/// Subtracts `M·S(n·x + Θ)` from complex residual bins; bins above the
/// stored range are dropped.
fn subtract_comb(residual: &mut [Complex64], comb: &[Complex64], term: &Term, sign: f64) {
    let max_bin = residual.len();
    for (p, s) in comb.iter().enumerate().map(|(i, s)| (i + 1, s)) {
        let bin = p * term.n;
        if bin > max_bin {
            break;
        }
        if s.norm_sqr() == 0.0 {
            continue;
        }
        let shift = Complex64::from_polar(sign * term.module, p as f64 * term.phase);
        residual[bin - 1] -= s * shift;
    }
}

pub fn deconstruct(
    spec: &PolarSpectrum,
    basis: &BasisFunction,
    opts: &DeconstructOptions,
) -> Result<Decomposition> {
    let available = spec.harmonic_count();
    if opts.max_terms > available {
        return Err(Error::TooManyTerms {
            requested: opts.max_terms,
            available,
        });
    }
    let fundamental = check_basis(basis, opts.strict)?;
    let s1 = fundamental.norm();
    let phi1 = fundamental.arg();
    let comb = basis.comb();

    let mut residual = spec.to_complex();
    let mut trace = vec![spectrum::complex_norm(0.0, &residual)];
    let mut terms = Vec::with_capacity(opts.max_terms);

    for n in 1..=opts.max_terms {
        let r = residual[n - 1];
        let m = r.norm();
        let term = if m <= ZERO_TOL {
            Term {
                n,
                module: 0.0,
                phase: 0.0,
            }
        } else {
            Term {
                n,
                module: m / s1,
                phase: wrap_phase(r.arg() - phi1),
            }
        };
        if term.module != 0.0 {
            subtract_comb(&mut residual, &comb, &term, 1.0);
        }
        terms.push(term);
        let norm = spectrum::complex_norm(0.0, &residual);
        trace.push(norm);
        if opts.rms_eps > 0.0 && norm <= opts.rms_eps {
            break;
        }
    }

    let converged = *trace.last().unwrap() <= opts.rms_eps;
    Ok(Decomposition {
        c0: spec.c0,
        basis_name: basis.name().to_string(),
        basis_kind: basis.kind(),
        terms,
        residual_trace: trace,
        rms_eps: opts.rms_eps,
        converged,
    })
}

/// Spectrum of `c0 + Σ_n M_n·S(n·x + Θ_n)` truncated to `bins` harmonics.
pub fn reconstruct_spectrum(decomp: &Decomposition, basis: &BasisFunction, bins: usize) -> PolarSpectrum {
    let comb = basis.comb();
    let mut acc = vec![Complex64::new(0.0, 0.0); bins];
    for term in decomp.terms.iter().filter(|t| t.module != 0.0) {
        // subtracting a negated term accumulates it
        subtract_comb(&mut acc, &comb, term, -1.0);
    }
    PolarSpectrum::from_complex(decomp.c0, &acc)
}

/// Bin-wise `spec − reconstruct_spectrum(decomp)`.
pub fn residual_of(spec: &PolarSpectrum, decomp: &Decomposition, basis: &BasisFunction) -> PolarSpectrum {
    let bins = spec.harmonic_count();
    let recon = reconstruct_spectrum(decomp, basis, bins).to_complex();
    let diff: Vec<Complex64> = spec
        .to_complex()
        .iter()
        .zip(&recon)
        .map(|(a, b)| a - b)
        .collect();
    PolarSpectrum::from_complex(spec.c0 - decomp.c0, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{analyze_frame, spectrum_norm, PolarBin, SampledFrame};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn square_spec(bins: usize) -> PolarSpectrum {
        BasisFunction::square(bins).unwrap().spectrum().clone()
    }

    #[test]
    fn square_by_square_is_one_term() {
        let spec = square_spec(127);
        let basis = BasisFunction::square(127).unwrap();
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(127)).unwrap();
        assert!((d.terms[0].module - 1.0).abs() < 1e-12);
        assert!(d.terms[0].phase.abs() < 1e-12);
        assert!(d.terms[1..].iter().all(|t| t.module == 0.0));
        assert!(d.residual_trace[1] < 1e-9);
    }

    #[test]
    fn sine_by_square() {
        let spec = analyze_frame(&SampledFrame::from_fn(256, f64::sin).unwrap()).unwrap();
        let basis = BasisFunction::square(127).unwrap();
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(1)).unwrap();
        assert!((d.terms[0].module - FRAC_PI_4).abs() < 1e-12);
        assert!(d.terms[0].phase.abs() < 1e-12);
        assert!(d.residual_trace[1] < d.residual_trace[0]);
        let r = residual_of(&spec, &d, &basis);
        assert!(r.bin(1).module < 1e-9);
        assert!((r.bin(3).module - 1.0 / 3.0).abs() < 1e-9);
        assert!((spectrum_norm(&r) - d.final_residual()).abs() < 1e-9);
    }

    #[test]
    fn sine_basis_degenerates_to_fourier() {
        let spec = PolarSpectrum::new(
            0.2,
            vec![PolarBin::new(1.0, 0.3), PolarBin::new(0.5, -2.0), PolarBin::ZERO, PolarBin::new(0.25, PI)],
        );
        let d = deconstruct(&spec, &BasisFunction::sine(), &DeconstructOptions::terms(4)).unwrap();
        for (t, b) in d.terms.iter().zip(spec.bins()) {
            assert!((t.module - b.module).abs() < 1e-12);
            if b.module > 0.0 {
                assert!((wrap_phase(t.phase - FRAC_PI_2) - b.phase).abs() < 1e-12);
            }
        }
        assert!(d.final_residual() < 1e-12);
        assert_eq!(d.c0, 0.2);
    }

    #[test]
    fn nonadmissible_fundamental() {
        let cos2 = BasisFunction::from_samples("cos2", &SampledFrame::from_fn(32, |x| (2.0 * x).cos()).unwrap()).unwrap();
        let spec = square_spec(15);
        assert!(matches!(
            deconstruct(&spec, &cos2, &DeconstructOptions::terms(3)),
            Err(Error::NonadmissibleFundamental { .. })
        ));
        let strict = DeconstructOptions {
            strict: true,
            ..DeconstructOptions::terms(3)
        };
        assert!(matches!(deconstruct(&spec, &cos2, &strict), Err(Error::NonadmissibleBasis { .. })));
    }

    #[test]
    fn too_many_terms() {
        let spec = square_spec(7);
        let err = deconstruct(&spec, &BasisFunction::sine(), &DeconstructOptions::terms(8)).unwrap_err();
        assert!(matches!(err, Error::TooManyTerms { requested: 8, available: 7 }));
    }

    #[test]
    fn early_stop() {
        let spec = square_spec(63);
        let opts = DeconstructOptions {
            rms_eps: 1e-6,
            ..DeconstructOptions::terms(63)
        };
        let d = deconstruct(&spec, &BasisFunction::square(63).unwrap(), &opts).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!(d.converged);
        let full = deconstruct(&spec, &BasisFunction::square(63).unwrap(), &DeconstructOptions::terms(63)).unwrap();
        assert_eq!(full.terms.len(), 63);
        assert!(!full.converged || full.final_residual() == 0.0);
    }

    #[test]
    fn reconstruct_square_term() {
        let d = Decomposition {
            c0: 0.0,
            basis_name: "square".into(),
            basis_kind: BasisKind::Square,
            terms: vec![Term { n: 1, module: 1.0, phase: 0.0 }],
            residual_trace: vec![0.0, 0.0],
            rms_eps: 0.0,
            converged: true,
        };
        let s = reconstruct_spectrum(&d, &BasisFunction::square(7).unwrap(), 7);
        for k in 1..=7 {
            let bin = s.bin(k);
            if k % 2 == 1 {
                assert!((bin.module - 4.0 / (PI * k as f64)).abs() < 1e-15);
                assert!((bin.phase + FRAC_PI_2).abs() < 1e-15);
            } else {
                assert_eq!(bin.module, 0.0);
            }
        }
        let empty = Decomposition { c0: 1.0, terms: vec![], ..d };
        let s = reconstruct_spectrum(&empty, &BasisFunction::square(7).unwrap(), 7);
        assert_eq!(s.c0, 1.0);
        assert!(s.bins().iter().all(|b| b.module == 0.0));
    }

    #[test]
    fn truncation_helpers() {
        let spec = analyze_frame(&SampledFrame::from_fn(256, f64::sin).unwrap()).unwrap();
        let basis = BasisFunction::square(127).unwrap();
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(60)).unwrap();
        let t = d.truncated(9);
        let direct = deconstruct(&spec, &basis, &DeconstructOptions::terms(9)).unwrap();
        assert_eq!(t, direct);
        let five = d.with_nonzero_terms(5);
        assert_eq!(five.nonzero_terms().count(), 5);
        assert_eq!(five.terms.last().unwrap().n, 11);
    }
}
