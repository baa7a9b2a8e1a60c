use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{
    AnalyzeArgs, BasisArgs, CompareHaarArgs, EngineName, GenArgs, InterpName, RenderArgs, RoundtripArgs, Shape,
    StatsArgs, SynthArgs, EXIT_CLAIM_FAILED, EXIT_OK,
};
use crate::basis::BasisFunction;
use crate::deconstruct::{self, DeconstructOptions, Decomposition};
use crate::error::{Error, Result};
use crate::io::{self, DecompositionFile};
use crate::signals;
use crate::spectrum::{self, PolarBin, PolarSpectrum, SampledFrame};
use crate::synth::{self, EngineStats, Interpolation, LutConfig, Render, RenderConfig};

/// Looks up a basis by CLI name for frames of `len` samples.
///
/// `square` is the analytic series truncated at the frame's top harmonic;
/// `square-grid` is the two-level wave sampled on the frame's own grid.
pub fn resolve_basis(name: &str, len: usize) -> Result<BasisFunction> {
    match name {
        "square" => BasisFunction::square((len / 2).saturating_sub(1).max(1)),
        "square-grid" => BasisFunction::sampled_square(len),
        "sine" => Ok(BasisFunction::sine()),
        n => {
            if let Some(grid) = n.strip_prefix("square-grid:") {
                let grid = grid
                    .parse()
                    .map_err(|_| Error::BadParams(format!("bad grid size in basis `{n}`")))?;
                return BasisFunction::sampled_square(grid);
            }
            let table = io::read_signal(Path::new(n))?;
            BasisFunction::from_samples(n, &SampledFrame::new(table)?)
        }
    }
}

fn parse_harmonics(text: &str) -> Result<PolarSpectrum> {
    let mut parsed = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Error::BadParams(format!("harmonic `{item}` is not k:module:phase"));
        let fields: Vec<&str> = item.split(':').collect();
        if fields.len() != 3 {
            return Err(bad());
        }
        let k: usize = fields[0].parse().map_err(|_| bad())?;
        let m: f64 = fields[1].parse().map_err(|_| bad())?;
        let th: f64 = fields[2].parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        parsed.push((k, m, th));
    }
    let top = parsed.iter().map(|p| p.0).max().ok_or_else(|| Error::BadParams("no harmonics given".into()))?;
    let mut bins = vec![PolarBin::ZERO; top];
    for (k, m, th) in parsed {
        bins[k - 1] = PolarBin::new(m, th);
    }
    Ok(PolarSpectrum::new(0.0, bins))
}

fn write_signal(path: &Path, samples: &[f64], rate: u32) -> Result<Option<f64>> {
    if io::is_wav(path) {
        Ok(Some(io::write_wav(path, samples, rate)?.scale))
    } else {
        io::write_signal_csv(path, samples)?;
        Ok(None)
    }
}

pub fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let len = args.period_samples;
    let period = match args.shape {
        Shape::Sine => signals::sine(len, io::FULL_SCALE_PEAK),
        Shape::Square => signals::square(len, io::FULL_SCALE_PEAK),
        Shape::Multiharmonic => {
            let spec = match &args.harmonics {
                Some(h) => parse_harmonics(h)?,
                None => signals::multiharmonic_spectrum(args.seed, args.components, args.max_harmonic)?,
            };
            let mut s = spectrum::synthesize_frame(&spec, len)?.into_samples();
            signals::normalize_peak(&mut s, io::FULL_SCALE_PEAK);
            s
        }
        Shape::File => {
            let input = args
                .input
                .as_deref()
                .ok_or_else(|| Error::BadParams("--shape file needs --input".into()))?;
            io::read_signal(input)?
        }
    };
    if args.shape != Shape::File {
        SampledFrame::new(period.clone())?;
    }
    let samples = signals::repeat(&period, args.periods.max(1));
    write_signal(&args.out, &samples, args.rate)?;
    writeln!(out, "wrote {} samples to {}", samples.len(), args.out.display())?;
    Ok(EXIT_OK)
}

fn first_period(path: &Path, len: usize) -> Result<SampledFrame> {
    let signal = io::read_signal(path)?;
    if signal.len() < len {
        return Err(Error::FileFormat(format!(
            "{} holds {} samples, fewer than one period of {len}",
            path.display(),
            signal.len()
        )));
    }
    SampledFrame::new(signal[..len].to_vec())
}

struct Analysis {
    frame: SampledFrame,
    basis: BasisFunction,
    decomp: Decomposition,
}

fn run_analysis(input: &Path, len: usize, args: &BasisArgs, err: &mut dyn Write) -> Result<Analysis> {
    let frame = first_period(input, len)?;
    let spec = spectrum::analyze_frame(&frame)?;
    let basis = resolve_basis(&args.basis, len)?;
    if !basis.is_admissible() && !args.strict {
        writeln!(
            err,
            "warning: basis `{}` has margin {:.6}; convergence is not guaranteed",
            basis.name(),
            basis.margin()
        )?;
    }
    let opts = DeconstructOptions {
        max_terms: args.terms.unwrap_or(spec.harmonic_count()),
        rms_eps: args.eps,
        strict: args.strict,
    };
    let decomp = deconstruct::deconstruct(&spec, &basis, &opts)?;
    Ok(Analysis { frame, basis, decomp })
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let a = run_analysis(&args.input, args.period_samples, &args.basis, err)?;
    DecompositionFile::from_decomposition(&a.decomp).write(&args.out)?;
    if let Some(path) = &args.spectrum {
        io::write_spectrum_csv(path, &a.decomp)?;
    }
    writeln!(out, "basis: {}", a.basis.name())?;
    writeln!(out, "margin: {:.9}", a.basis.margin())?;
    writeln!(out, "admissible: {}", a.basis.is_admissible())?;
    writeln!(out, "input_norm: {:.9e}", spectrum::norm(&a.frame))?;
    writeln!(out, "terms: {}", a.decomp.terms.len())?;
    writeln!(out, "nonzero_terms: {}", a.decomp.nonzero_terms().count())?;
    writeln!(out, "converged: {}", a.decomp.converged)?;
    writeln!(out, "final_residual: {:.9e}", a.decomp.final_residual())?;
    Ok(EXIT_OK)
}

fn lut(args: &RenderArgs) -> LutConfig {
    LutConfig {
        size: args.lut_size,
        interpolation: match args.interp {
            InterpName::Nearest => Interpolation::Nearest,
            InterpName::Linear => Interpolation::Linear,
        },
    }
}

fn render_with(engine: EngineName, decomp: &Decomposition, cfg: &RenderConfig, lut: &LutConfig) -> Result<Render> {
    match engine {
        EngineName::Naive => synth::render_naive(decomp, cfg),
        EngineName::Diff => synth::render_differential(decomp, cfg),
        EngineName::Fourier => {
            let basis = resolve_basis(&decomp.basis_name, cfg.samples_per_period)?;
            let bins = cfg.samples_per_period / 2 - 1;
            let spec = deconstruct::reconstruct_spectrum(decomp, &basis, bins);
            synth::render_fourier(&spec, cfg, lut)
        }
    }
}

fn engine_label(engine: EngineName) -> &'static str {
    match engine {
        EngineName::Naive => "naive",
        EngineName::Diff => "diff",
        EngineName::Fourier => "fourier",
    }
}

fn stats_block(engine: EngineName, stats: &EngineStats, scale: Option<f64>) -> String {
    let mut s = String::new();
    writeln!(s, "engine: {}", engine_label(engine)).unwrap();
    writeln!(s, "samples_rendered: {}", stats.samples_rendered).unwrap();
    writeln!(s, "adds: {}", stats.adds).unwrap();
    writeln!(s, "multiplies: {}", stats.multiplies).unwrap();
    writeln!(s, "table_reads: {}", stats.table_reads).unwrap();
    writeln!(s, "interpolations: {}", stats.interpolations).unwrap();
    writeln!(s, "sign_flips: {}", stats.sign_flips).unwrap();
    writeln!(s, "adds_per_sample: {:.6}", stats.adds_per_sample()).unwrap();
    if let Some(scale) = scale {
        writeln!(s, "wav_scale: {scale:.9}").unwrap();
    }
    s
}

fn render_config(args: &RenderArgs, decimate: bool) -> RenderConfig {
    RenderConfig {
        samples_per_period: args.period_samples,
        periods: args.periods,
        oversample: args.oversample,
        filter_cutoff: args.cutoff,
        decimate,
    }
}

pub fn synth(args: &SynthArgs, out: &mut dyn Write) -> Result<i32> {
    let decomp = DecompositionFile::read(&args.input)?.into_decomposition()?;
    let cfg = render_config(&args.render, args.decimate);
    let render = render_with(args.engine, &decomp, &cfg, &lut(&args.render))?;
    let scale = write_signal(&args.out, &render.samples, args.rate)?;
    let block = stats_block(args.engine, &render.stats, scale);
    if let Some(path) = &args.stats {
        fs::write(path, &block)?;
    }
    write!(out, "{block}")?;
    Ok(EXIT_OK)
}

pub fn stats(args: &StatsArgs, out: &mut dyn Write) -> Result<i32> {
    let decomp = DecompositionFile::read(&args.input)?.into_decomposition()?;
    let cfg = render_config(&args.render, false);
    let mut engines = Vec::new();
    if decomp.basis_kind.is_two_level() {
        engines.extend([EngineName::Naive, EngineName::Diff]);
    }
    engines.push(EngineName::Fourier);
    for engine in engines {
        let render = render_with(engine, &decomp, &cfg, &lut(&args.render))?;
        writeln!(out, "{}", stats_block(engine, &render.stats, None))?;
    }
    Ok(EXIT_OK)
}

fn rms_difference(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (sum / a.len() as f64).sqrt()
}

pub fn roundtrip(args: &RoundtripArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let len = args.period_samples;
    let a = run_analysis(&args.input, len, &args.basis, err)?;
    let engine = args.engine.unwrap_or(if a.decomp.basis_kind.is_two_level() {
        EngineName::Diff
    } else {
        EngineName::Fourier
    });
    let cfg = RenderConfig {
        samples_per_period: len,
        periods: 1,
        oversample: args.oversample,
        filter_cutoff: args.cutoff,
        decimate: true,
    };
    let lut = LutConfig {
        size: args.lut_size,
        interpolation: Interpolation::Linear,
    };
    let render = render_with(engine, &a.decomp, &cfg, &lut)?;
    let rms = rms_difference(&render.samples, a.frame.samples());
    let norm = spectrum::norm(&a.frame);

    writeln!(out, "basis: {}", a.basis.name())?;
    writeln!(out, "engine: {}", engine_label(engine))?;
    writeln!(out, "trace:")?;
    for (j, r) in a.decomp.residual_trace.iter().enumerate() {
        writeln!(out, "  {j} {r:.9e}")?;
    }
    writeln!(out, "final_residual: {:.9e}", a.decomp.final_residual())?;
    writeln!(out, "final_rms: {rms:.9e}")?;
    writeln!(out, "relative_rms: {:.9e}", if norm > 0.0 { rms / norm } else { rms })?;
    if let Some(path) = &args.trace_csv {
        io::write_trace_csv(path, &a.decomp.residual_trace)?;
    }
    Ok(EXIT_OK)
}

struct HaarComparison {
    haar_rms: f64,
    square_rms: f64,
    /// Highest harmonic used by the square-wave reconstruction.
    square_top: usize,
}

fn haar_vs_square(len: usize, haar_n: usize, square_n: usize, oversample: usize, cutoff: f64) -> Result<HaarComparison> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let target = SampledFrame::from_fn(len, f64::sin)?;
    let haar = synth::haar_approx(&target, haar_n)?;

    let spec = spectrum::analyze_frame(&target)?;
    let basis = BasisFunction::square(spec.harmonic_count())?;
    let full = deconstruct::deconstruct(&spec, &basis, &DeconstructOptions::terms(spec.harmonic_count()))?;
    let decomp = full.with_nonzero_terms(square_n);
    let cfg = RenderConfig {
        samples_per_period: len,
        periods: 1,
        oversample,
        filter_cutoff: Some(cutoff),
        decimate: false,
    };
    let render = synth::render_differential(&decomp, &cfg)?;
    let rate = cfg.render_rate();
    let reference: Vec<f64> = (0..rate).map(|i| (2.0 * PI * i as f64 / rate as f64).sin()).collect();
    Ok(HaarComparison {
        haar_rms: haar.rms_error,
        square_rms: rms_difference(&render.samples, &reference),
        square_top: decomp.terms.len(),
    })
}

pub fn compare_haar(args: &CompareHaarArgs, out: &mut dyn Write) -> Result<i32> {
    if args.signal != "sine" {
        return Err(Error::BadParams(format!("unsupported signal `{}`; only `sine` is available", args.signal)));
    }
    let c = haar_vs_square(args.period_samples, args.haar_n, args.square_n, args.oversample, args.cutoff)?;
    writeln!(out, "haar_functions: {}", args.haar_n)?;
    writeln!(out, "haar_rms: {:.9e}", c.haar_rms)?;
    writeln!(out, "square_waves: {} (harmonics up to {})", args.square_n, c.square_top)?;
    writeln!(out, "square_rms: {:.9e}", c.square_rms)?;
    let square_wins = c.square_rms < c.haar_rms;
    writeln!(out, "winner: {}", if square_wins { "square" } else { "haar" })?;
    Ok(if square_wins { EXIT_OK } else { EXIT_CLAIM_FAILED })
}
