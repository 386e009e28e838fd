//! Atoms in optical lattice sites with thermally populated, equidistant
//! internal levels `E_j = j·ΔE`, `j = 0, …, m-1`.
//!
//! All temperatures are the dimensionless ratio `k_B T / ΔE`.

use crate::coherence::{coherence_spectral, CoherenceResult};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::state::Spectrum;

pub const DEFAULT_LEVELS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalConfig {
    pub levels: usize,
    pub kbt_over_de: f64,
}

impl ThermalConfig {
    pub fn new(levels: usize, kbt_over_de: f64) -> Result<Self> {
        if levels < 2 {
            return Err(Error::Domain(format!(
                "thermal model needs at least 2 levels, got {levels}"
            )));
        }
        if kbt_over_de.is_nan() || kbt_over_de <= 0.0 {
            return Err(Error::Domain(format!(
                "temperature k_B T/ΔE must be positive, got {kbt_over_de}"
            )));
        }
        Ok(ThermalConfig {
            levels,
            kbt_over_de,
        })
    }

    pub fn with_default_levels(kbt_over_de: f64) -> Result<Self> {
        Self::new(DEFAULT_LEVELS, kbt_over_de)
    }

    /// Boltzmann factor of one level spacing, `e^{-ΔE / k_B T}`.
    pub fn boltzmann_ratio(&self) -> f64 {
        (-1.0 / self.kbt_over_de).exp()
    }
}

/// `λ_j = e^{-j ΔE/k_B T} / Z`, ground state first.
pub fn thermal_spectrum(cfg: &ThermalConfig) -> Spectrum {
    let x = cfg.boltzmann_ratio();
    let weights: Vec<f64> = (0..cfg.levels as i32).map(|j| x.powi(j)).collect();
    Spectrum::new(weights).expect("Boltzmann weights are positive")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalRow {
    pub kbt_over_de: f64,
    pub n: usize,
    pub coherence: CoherenceResult,
}

/// Coherence on a temperature × particle-number grid.
///
/// Rows come out temperature-major, in input order.
pub fn coherence_vs_temperature(
    levels: usize,
    temperatures: &[f64],
    ns: &[usize],
    exec: Execution,
) -> Result<Vec<ThermalRow>> {
    let configs = temperatures
        .iter()
        .map(|&t| ThermalConfig::new(levels, t))
        .collect::<Result<Vec<_>>>()?;
    let blocks = exec::map(exec, &configs, |cfg| {
        let spec = thermal_spectrum(cfg);
        ns.iter()
            .map(|&n| {
                Ok(ThermalRow {
                    kbt_over_de: cfg.kbt_over_de,
                    n,
                    coherence: coherence_spectral(&spec, n)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut rows = Vec::with_capacity(temperatures.len() * ns.len());
    for block in blocks {
        rows.extend(block?);
    }
    Ok(rows)
}

fn low_t_regime(cfg: &ThermalConfig) -> Result<f64> {
    let x = cfg.boltzmann_ratio();
    if x >= 0.5 {
        return Err(Error::Regime(format!(
            "low-temperature approximation requires k_B T/ΔE ≪ 1/ln 2 ≈ 1.44, got {}",
            cfg.kbt_over_de
        )));
    }
    Ok(x)
}

/// `(1 - e^{-ΔE/k_B T})^N`.
pub fn low_t_approx(cfg: &ThermalConfig, n: usize) -> Result<f64> {
    let x = low_t_regime(cfg)?;
    Ok((n as f64 * (-x).ln_1p()).exp())
}

/// `1 - N e^{-ΔE/k_B T}`, the further expansion for `k_B T/ΔE ≪ 1/ln N`.
pub fn low_t_linear(cfg: &ThermalConfig, n: usize) -> Result<f64> {
    let x = low_t_regime(cfg)?;
    if n as f64 * x >= 1.0 {
        return Err(Error::Regime(format!(
            "linear approximation requires k_B T/ΔE ≪ 1/ln N = {:.4}, got {}",
            1.0 / (n as f64).ln(),
            cfg.kbt_over_de
        )));
    }
    Ok(1.0 - n as f64 * x)
}

fn check_target(w: f64, n: usize) -> Result<()> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::Domain(format!(
            "target coherence must lie in (0, 1), got {w}"
        )));
    }
    if n < 2 {
        return Err(Error::UndefinedOrder(n));
    }
    Ok(())
}

/// Largest temperature keeping `(1 - e^{-ΔE/k_B T})^N = W`:
/// `k_B T/ΔE = -1 / ln(1 - W^{1/N})`.
pub fn admissible_temperature(w_target: f64, n: usize) -> Result<f64> {
    check_target(w_target, n)?;
    let one_minus_root = -(w_target.ln() / n as f64).exp_m1();
    Ok(-1.0 / one_minus_root.ln())
}

/// `k_B T/ΔE ≈ 1 / ln[N / (1 - W)]`.
pub fn admissible_temperature_simplified(w_target: f64, n: usize) -> Result<f64> {
    check_target(w_target, n)?;
    Ok(1.0 / (n as f64 / (1.0 - w_target)).ln())
}
