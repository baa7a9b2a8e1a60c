mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use sqsynth::deconstruct::{reconstruct_spectrum, residual_of, ZERO_TOL};
use sqsynth::spectrum::{analyze_frame, spectrum_norm};
use sqsynth::{deconstruct, BasisFunction, DeconstructOptions, Error, PolarBin, PolarSpectrum, SampledFrame};

use common::{direct_polar, direct_synth, phase_distance, rms};

const LEN: usize = 64;
const BINS: usize = LEN / 2 - 1;

fn random_bins(count: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, -PI..PI), count)
}

fn signal_strategy() -> impl Strategy<Value = (f64, Vec<(f64, f64)>)> {
    (-1.0..1.0f64, random_bins(BINS))
}

/// Tabulated basis from a random spectrum whose fundamental is at least
/// `s1_min`; admissibility is not enforced.
fn basis_strategy(s1_min: f64) -> impl Strategy<Value = (f64, Vec<(f64, f64)>)> {
    (s1_min..2.0f64, -PI..PI, prop::collection::vec((0.0..0.6f64, -PI..PI), 0..12)).prop_map(|(s1, p1, rest)| {
        let mut bins = vec![(s1, p1)];
        bins.extend(rest);
        (0.0, bins)
    })
}

fn to_spectrum(c0: f64, bins: &[(f64, f64)]) -> PolarSpectrum {
    PolarSpectrum::new(c0, bins.iter().map(|&(m, p)| PolarBin::new(m, p)).collect())
}

fn tabulated(bins: &[(f64, f64)]) -> BasisFunction {
    let table = direct_synth(0.0, bins, LEN);
    BasisFunction::from_samples("random", &SampledFrame::new(table).unwrap()).unwrap()
}

/// The deconstruction done sample by sample: read bin n of the residual with
/// a direct DFT, then subtract `M·S(n x + Θ)` evaluated on the grid with the
/// basis harmonics that fit below the band edge.
fn time_domain_oracle(signal: &[f64], basis_table: &[f64], terms: usize) -> (Vec<(f64, f64)>, Vec<f64>) {
    let len = signal.len();
    let (_, sb) = direct_polar(basis_table);
    let (s1, phi1) = sb[0];
    let c0 = signal.iter().sum::<f64>() / len as f64;
    let mut residual: Vec<f64> = signal.iter().map(|x| x - c0).collect();
    let mut trace = vec![rms(&residual)];
    let mut out = Vec::new();
    for n in 1..=terms {
        let (m, th) = direct_polar(&residual).1[n - 1];
        let (big_m, big_th) = if m <= ZERO_TOL { (0.0, 0.0) } else { (m / s1, th - phi1) };
        for (i, r) in residual.iter_mut().enumerate() {
            let x = 2.0 * PI * i as f64 / len as f64;
            let mut s = 0.0;
            for (p, &(sp, php)) in sb.iter().enumerate().map(|(j, b)| (j + 1, b)) {
                if p * n > len / 2 - 1 {
                    break;
                }
                s += sp * (p as f64 * (n as f64 * x + big_th) + php).cos();
            }
            *r -= big_m * s;
        }
        out.push((big_m, big_th));
        trace.push(rms(&residual));
    }
    (out, trace)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_time_domain_oracle((c0, bins) in signal_strategy(), (_, bb) in basis_strategy(0.3), terms in 1usize..=BINS) {
        let signal = direct_synth(c0, &bins, LEN);
        let table = direct_synth(0.0, &bb, LEN);
        let basis = tabulated(&bb);
        let spec = analyze_frame(&SampledFrame::new(signal.clone()).unwrap()).unwrap();
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(terms)).unwrap();
        let (expect, trace) = time_domain_oracle(&signal, &table, terms);
        prop_assert!((d.c0 - c0).abs() < 1e-9);
        for (t, &(m, th)) in d.terms.iter().zip(&expect) {
            prop_assert!((t.module - m).abs() < 1e-8 * m.max(1.0), "n={} {} vs {}", t.n, t.module, m);
            if m > 1e-6 {
                prop_assert!(phase_distance(t.phase, th) < 1e-7);
            }
        }
        for (a, b) in d.residual_trace.iter().zip(&trace) {
            prop_assert!((a - b).abs() < 1e-8 * b.max(1.0));
        }
    }

    #[test]
    fn annihilates_solved_bins((c0, bins) in signal_strategy(), (_, bb) in basis_strategy(0.05), terms in 0usize..=BINS) {
        let spec = to_spectrum(c0, &bins);
        let basis = tabulated(&bb);
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(terms)).unwrap();
        let r = residual_of(&spec, &d, &basis);
        for k in 1..=terms {
            prop_assert!(r.bin(k).module <= 1e-12, "bin {} = {}", k, r.bin(k).module);
        }
        prop_assert!(r.c0.abs() <= 1e-15);
    }

    #[test]
    fn residual_norm_stays_within_triangle_bound((c0, bins) in signal_strategy(), (_, bb) in basis_strategy(0.3)) {
        // removing bin n costs ½m_n² of energy, adding the comb tail adds at most
        // M_n·‖tail‖, so ‖r_n‖ ≤ √(‖r_{n-1}‖² − ½m_n²) + M_n·‖tail_n‖
        let spec = to_spectrum(c0, &bins);
        let basis = tabulated(&bb);
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(BINS)).unwrap();
        let sb = basis.spectrum();
        let mut residual = spec.clone();
        for (j, t) in d.terms.iter().enumerate() {
            let m_n = residual_of(&spec, &d.truncated(j), &basis).bin(t.n).module;
            let tail: f64 = (2..)
                .take_while(|p| p * t.n <= BINS)
                .map(|p| sb.bin(p).module.powi(2) / 2.0)
                .sum::<f64>()
                .sqrt();
            let prev = d.residual_trace[j];
            let bound = (prev * prev - m_n * m_n / 2.0).max(0.0).sqrt() + t.module * tail;
            prop_assert!(d.residual_trace[j + 1] <= bound + 1e-12);
            residual = residual_of(&spec, &d.truncated(j + 1), &basis);
        }
        prop_assert!(spectrum_norm(&residual) < 1e-9);
    }

    #[test]
    fn sine_basis_is_fourier_analysis((c0, bins) in signal_strategy()) {
        let spec = to_spectrum(c0, &bins);
        let d = deconstruct(&spec, &BasisFunction::sine(), &DeconstructOptions::terms(BINS)).unwrap();
        for (t, b) in d.terms.iter().zip(spec.bins()) {
            prop_assert!((t.module - b.module).abs() < 1e-12);
            if b.module > ZERO_TOL {
                prop_assert!(phase_distance(t.phase, b.phase + PI / 2.0) < 1e-12);
            }
        }
        prop_assert!(d.final_residual() < 1e-9);
        for w in d.residual_trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        let back = reconstruct_spectrum(&d, &BasisFunction::sine(), BINS);
        for (a, b) in back.bins().iter().zip(spec.bins()) {
            prop_assert!((a.to_complex() - b.to_complex()).norm() < 1e-12);
        }
    }

    #[test]
    fn energy_accounting_after_full_annihilation((c0, bins) in signal_strategy(), (_, bb) in basis_strategy(0.3)) {
        let spec = to_spectrum(c0, &bins);
        let basis = tabulated(&bb);
        let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(BINS)).unwrap();
        let rec = reconstruct_spectrum(&d, &basis, BINS);
        let res = residual_of(&spec, &d, &basis);
        let lhs = spectrum_norm(&spec).powi(2);
        let rhs = spectrum_norm(&rec).powi(2) + spectrum_norm(&res).powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn deterministic((c0, bins) in signal_strategy(), (_, bb) in basis_strategy(0.3)) {
        let spec = to_spectrum(c0, &bins);
        let basis = tabulated(&bb);
        let opts = DeconstructOptions::terms(20);
        let a = deconstruct(&spec, &basis, &opts).unwrap();
        let b = deconstruct(&spec, &basis, &opts).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn residual_norm_equals_trace_tail() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..20 {
        let (c0, bins) = signal_strategy().new_tree(&mut runner).unwrap().current();
        let spec = to_spectrum(c0, &bins);
        let basis = BasisFunction::square(BINS).unwrap();
        for terms in [1, 5, 17] {
            let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(terms)).unwrap();
            let r = residual_of(&spec, &d, &basis);
            assert!((spectrum_norm(&r) - d.final_residual()).abs() < 1e-12);
        }
    }
}

fn analytic_square_spectrum(bins: usize) -> PolarSpectrum {
    PolarSpectrum::new(
        0.0,
        (1..=bins)
            .map(|k| {
                if k % 2 == 1 {
                    PolarBin::new(4.0 / (PI * k as f64), -PI / 2.0)
                } else {
                    PolarBin::ZERO
                }
            })
            .collect(),
    )
}

#[test]
fn square_by_square_is_one_term() {
    let spec = analytic_square_spectrum(BINS);
    let d = deconstruct(&spec, &BasisFunction::square(BINS).unwrap(), &DeconstructOptions::terms(BINS)).unwrap();
    assert!((d.terms[0].module - 1.0).abs() < 1e-12);
    assert!(d.terms[0].phase.abs() < 1e-12);
    assert!(d.terms[1..].iter().all(|t| t.module == 0.0 && t.phase == 0.0));
    assert!(d.residual_trace[1] < 1e-9);
    assert_eq!(d.residual_trace.len(), BINS + 1);
}

#[test]
fn sine_by_square_first_term() {
    let spec = PolarSpectrum::new(0.0, vec![PolarBin::new(1.0, -PI / 2.0)]).resized(BINS);
    let basis = BasisFunction::square(BINS).unwrap();
    let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(1)).unwrap();
    assert!((d.terms[0].module - PI / 4.0).abs() < 1e-12);
    assert!(d.terms[0].phase.abs() < 1e-12);
    assert!(d.residual_trace[1] < d.residual_trace[0]);
    let r = residual_of(&spec, &d, &basis);
    assert!(r.bin(1).module < 1e-9);
    assert!((r.bin(3).module - 1.0 / 3.0).abs() < 1e-9);
    assert!(r.bin(2).module < 1e-15);
}

#[test]
fn reconstruct_square_term() {
    let spec = analytic_square_spectrum(7);
    let basis = BasisFunction::square(7).unwrap();
    let d = deconstruct(&spec, &basis, &DeconstructOptions::terms(1)).unwrap();
    let back = reconstruct_spectrum(&d, &basis, 7);
    for k in 1..=7 {
        let expect = if k % 2 == 1 { 4.0 / (PI * k as f64) } else { 0.0 };
        assert!((back.bin(k).module - expect).abs() < 1e-12);
        if expect > 0.0 {
            assert!(phase_distance(back.bin(k).phase, -PI / 2.0) < 1e-12);
        }
    }
    let empty = sqsynth::Decomposition { c0: 1.0, terms: vec![], ..d.truncated(0) };
    let constant = reconstruct_spectrum(&empty, &basis, 7);
    assert_eq!(constant.c0, 1.0);
    assert!(constant.bins().iter().all(|b| b.module == 0.0));
}

#[test]
fn every_term_index_is_recorded() {
    let spec = analytic_square_spectrum(BINS);
    let d = deconstruct(&spec, &BasisFunction::sine(), &DeconstructOptions::terms(10)).unwrap();
    let ns: Vec<usize> = d.terms.iter().map(|t| t.n).collect();
    assert_eq!(ns, (1..=10).collect::<Vec<_>>());
}

#[test]
fn early_stop_only_with_positive_eps() {
    let spec = PolarSpectrum::new(0.0, vec![PolarBin::new(1.0, 0.3)]).resized(BINS);
    let all = deconstruct(&spec, &BasisFunction::sine(), &DeconstructOptions::terms(BINS)).unwrap();
    assert_eq!(all.terms.len(), BINS);
    let opts = DeconstructOptions {
        rms_eps: 1e-9,
        ..DeconstructOptions::terms(BINS)
    };
    let stopped = deconstruct(&spec, &BasisFunction::sine(), &opts).unwrap();
    assert_eq!(stopped.terms.len(), 1);
    assert!(stopped.converged);
}

fn cos2_basis() -> BasisFunction {
    let table: Vec<f64> = (0..LEN).map(|i| (4.0 * PI * i as f64 / LEN as f64).cos()).collect();
    BasisFunction::from_samples("cos2", &SampledFrame::new(table).unwrap()).unwrap()
}

#[test]
fn nonadmissible_bases() {
    let basis = cos2_basis();
    assert!((basis.margin() + 1.0).abs() < 1e-12);
    assert!(!basis.is_admissible());
    let spec = analytic_square_spectrum(BINS);
    let strict = DeconstructOptions {
        strict: true,
        ..DeconstructOptions::terms(3)
    };
    assert!(matches!(deconstruct(&spec, &basis, &strict), Err(Error::NonadmissibleBasis { .. })));
    assert!(matches!(
        deconstruct(&spec, &basis, &DeconstructOptions::terms(3)),
        Err(Error::NonadmissibleFundamental { .. })
    ));
}

#[test]
fn too_many_terms() {
    let spec = analytic_square_spectrum(BINS);
    assert!(matches!(
        deconstruct(&spec, &BasisFunction::sine(), &DeconstructOptions::terms(BINS + 1)),
        Err(Error::TooManyTerms { .. })
    ));
}

#[test]
fn square_margin_decreases_with_budget() {
    let floor = 32.0 / (PI * PI) - 2.0;
    let budgets = [1, 2, 3, 10, 101, 1000, 10_000];
    let margins: Vec<f64> = budgets.iter().map(|&b| BasisFunction::square(b).unwrap().margin()).collect();
    assert!((margins[0] - 16.0 / (PI * PI)).abs() < 1e-12);
    for w in margins.windows(2) {
        assert!(w[0] >= w[1]);
    }
    assert!(margins.iter().all(|&m| m >= floor));
    assert!((margins[6] - floor).abs() < 1e-3);
}
