use approx::assert_abs_diff_eq;
use mbcoh_core::coherence::{coherence_asymptote, coherence_spectral};
use mbcoh_core::photon::{admissible_jitter, photon_coherence, photon_spectrum, PhotonConfig};
use mbcoh_core::state::DEFAULT_DEGENERACY_TOL;
use mbcoh_core::thermal::{
    coherence_vs_temperature, low_t_approx, thermal_spectrum, ThermalConfig,
};
use mbcoh_core::Execution;

/// `∬ P(x) P(x') e^{-s²(x-x')²} dx dx'` by the trapezoid rule on a uniform
/// grid, for the unit Gaussian `P`.
fn purity_by_trapezoid(s: f64) -> f64 {
    let (l, steps) = (9.0, 1800);
    let h = 2.0 * l / steps as f64;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let xs: Vec<f64> = (0..=steps).map(|i| -l + h * i as f64).collect();
    let w: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let end = if i == 0 || i == steps { 0.5 } else { 1.0 };
            end * h * norm * (-0.5 * x * x).exp()
        })
        .collect();
    let mut acc = 0.0;
    for (x, wx) in xs.iter().zip(&w) {
        for (y, wy) in xs.iter().zip(&w) {
            acc += wx * wy * (-s * s * (x - y) * (x - y)).exp();
        }
    }
    acc
}

#[test]
fn photon_purity_matches_direct_quadrature() {
    for s in [0.1, 0.5, 1.0, 2.0] {
        let spec = photon_spectrum(&PhotonConfig::gaussian(s), Execution::Parallel).unwrap();
        assert_abs_diff_eq!(spec.purity(), purity_by_trapezoid(s), epsilon = 1e-6);
    }
}

#[test]
fn photon_spectrum_is_a_valid_distribution() {
    for s in [0.05, 0.3, 1.0, 3.0] {
        let spec = photon_spectrum(&PhotonConfig::gaussian(s), Execution::Parallel).unwrap();
        let v = spec.values();
        assert_abs_diff_eq!(v.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(v.iter().all(|&x| x > 0.0));
        assert!(v.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn photon_decay_becomes_exponential() {
    let spec = photon_spectrum(&PhotonConfig::gaussian(0.5), Execution::Parallel).unwrap();
    let ln = |n: usize| coherence_spectral(&spec, n).unwrap().log10_value;
    let d1 = ln(101) - ln(100);
    let d2 = ln(102) - ln(101);
    assert!((d2 - d1).abs() < 1e-3);
    let early = (ln(4) - ln(3)) - (ln(3) - ln(2));
    assert!(early.abs() > (d2 - d1).abs());
}

#[test]
fn admissible_jitter_round_trip_in_faint_regime() {
    for w in [0.5, 0.7, 0.9, 0.95, 0.99] {
        for n in [2, 5, 10, 20, 50, 100] {
            let s = admissible_jitter(w, n).unwrap();
            if s > 0.1 {
                continue;
            }
            let cfg = PhotonConfig::gaussian(s);
            let got = photon_coherence(&cfg, n, Execution::Parallel)
                .unwrap()
                .value;
            assert!((got - w).abs() <= 0.02, "W={w} N={n} σΔ={s} got {got}");
        }
    }
}

#[test]
fn thermal_asymptote_at_100() {
    for t in [0.3, 0.5, 1.0] {
        let spec = thermal_spectrum(&ThermalConfig::with_default_levels(t).unwrap());
        let exact = coherence_spectral(&spec, 100).unwrap().log10_value;
        let asym = coherence_asymptote(&spec, 100, DEFAULT_DEGENERACY_TOL)
            .unwrap()
            .log10_value;
        assert!((10f64.powf(exact - asym) - 1.0).abs() < 0.05);
    }
}

#[test]
fn thermal_low_t_agreement_deep_in_regime() {
    // first-order corrections keep the deviation near x·(1-x)^{N-1}
    let temps: Vec<f64> = (1..=25).map(|i| 0.01 * i as f64).collect();
    let ns: Vec<usize> = (2..=100).collect();
    let rows = coherence_vs_temperature(4, &temps, &ns, Execution::Parallel).unwrap();
    for row in rows {
        let cfg = ThermalConfig::with_default_levels(row.kbt_over_de).unwrap();
        let approx = low_t_approx(&cfg, row.n).unwrap();
        assert!((row.coherence.value - approx).abs() <= 0.02);
    }
}

#[test]
fn photon_results_do_not_depend_on_execution() {
    let cfg = PhotonConfig::gaussian(0.7);
    let a = photon_spectrum(&cfg, Execution::Sequential).unwrap();
    let b = photon_spectrum(&cfg, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}
