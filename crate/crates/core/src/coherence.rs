//! Normalized many-body coherence `W_C` by several independent routes.
//!
//! * [`coherence_oracle`]: brute force over `S_N` for any internal state, small `N`.
//! * [`coherence_spectral`]: exact for product states, from the single-particle
//!   spectrum via the complete homogeneous symmetric polynomial `h_N`.
//! * [`coherence_maximally_mixed`], [`coherence_asymptote`], [`coherence_faint`]:
//!   closed forms and large-`N` asymptotics.
//! * [`oracle_power_sum`]: cycle-index evaluation of `h_N`, an independent
//!   check on the recurrence.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::external::{permutation_traces, MAX_EXTERNAL_N};
use crate::scaled::ScaledReal;
use crate::state::{DensityMatrix, Spectrum};
use crate::symgroup::{self, factorial};

/// Up to this `N` the finite-`N!` correction is applied; beyond it the
/// correction `1/(N!-1)` is below double precision.
pub const EXACT_FORM_MAX_N: usize = 20;
/// Values below this are reported as zero, with the logarithm kept.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    ExactProduct,
    Spectral,
    Asymptote,
    Faint,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::ExactProduct => "exact-product",
            Method::Spectral => "spectral",
            Method::Asymptote => "asymptote",
            Method::Faint => "faint",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A coherence value with its base-10 logarithm and provenance.
///
/// `value` is flushed to zero below [`UNDERFLOW_FLOOR`]; `log10_value` stays
/// finite whenever the true value is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceResult {
    pub value: f64,
    pub log10_value: f64,
    pub method: Method,
    /// Particle number of the full state.
    pub n: usize,
    /// Order of the (reduced) coherence; equals `n` unless reduced.
    pub k: usize,
}

impl CoherenceResult {
    fn from_value(value: f64, method: Method, n: usize) -> Self {
        let value = value.clamp(0.0, 1.0);
        CoherenceResult {
            value: if value < UNDERFLOW_FLOOR { 0.0 } else { value },
            log10_value: value.log10(),
            method,
            n,
            k: n,
        }
    }

    fn from_ln(ln_value: f64, method: Method, n: usize) -> Self {
        let ln_value = ln_value.min(0.0);
        let value = ln_value.exp();
        CoherenceResult {
            value: if value < UNDERFLOW_FLOOR { 0.0 } else { value },
            log10_value: ln_value / std::f64::consts::LN_10,
            method,
            n,
            k: n,
        }
    }

    fn from_scaled(h: ScaledReal, method: Method, n: usize) -> Self {
        let value = h.to_f64().min(1.0);
        CoherenceResult {
            value: if value < UNDERFLOW_FLOOR { 0.0 } else { value },
            log10_value: h.log10().min(0.0),
            method,
            n,
            k: n,
        }
    }

    /// True when the value is below the representable floor.
    pub fn underflow(&self) -> bool {
        self.value == 0.0 && self.log10_value.is_finite()
    }
}

fn require_order(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::UndefinedOrder(n));
    }
    Ok(())
}

/// `W_C = (Σ_π |tr(Π_π ρ)| - 1) / (N! - 1)` for an arbitrary internal state.
pub fn coherence_oracle(rho: &DensityMatrix, n: usize, exec: Execution) -> Result<CoherenceResult> {
    require_order(n)?;
    if n > MAX_EXTERNAL_N {
        return Err(Error::SizeLimit {
            what: "particle count for the brute-force oracle",
            actual: n,
            limit: MAX_EXTERNAL_N,
        });
    }
    let (_, traces) = permutation_traces(rho, n, exec)?;
    let total: f64 = traces.iter().map(|t| t.norm()).sum();
    let w = (total - 1.0) / (factorial(n) as f64 - 1.0);
    Ok(CoherenceResult::from_value(w, Method::Oracle, n))
}

/// Complete homogeneous symmetric polynomial `h_n(λ_1, …, λ_m)`.
///
/// Runs `h_d ← h_d + λ_j h_{d-1}` for each eigenvalue in turn, `O(m·n)`.
pub fn h_complete(spec: &Spectrum, n: usize) -> ScaledReal {
    let mut h = vec![ScaledReal::ZERO; n + 1];
    h[0] = ScaledReal::ONE;
    for &lambda in spec.values() {
        if lambda == 0.0 {
            continue;
        }
        let lambda = ScaledReal::from_f64(lambda);
        for d in 1..=n {
            h[d] = h[d] + lambda * h[d - 1];
        }
    }
    h[n]
}

/// `tr(Π_S ρ1p^⊗N) = h_N`: the coherence in the `N! ≫ 1` form.
pub fn symmetric_support(spec: &Spectrum, n: usize) -> Result<CoherenceResult> {
    require_order(n)?;
    Ok(CoherenceResult::from_scaled(
        h_complete(spec, n),
        Method::Spectral,
        n,
    ))
}

/// `W_C` of `ρ1p^⊗N` from the spectrum of `ρ1p`.
///
/// For `N <= EXACT_FORM_MAX_N` returns `(N!·h_N - 1)/(N! - 1)`, evaluated as
/// `h_N - (1 - h_N)/(N! - 1)`; above that, `h_N` itself.
pub fn coherence_spectral(spec: &Spectrum, n: usize) -> Result<CoherenceResult> {
    require_order(n)?;
    let h = h_complete(spec, n);
    if n <= EXACT_FORM_MAX_N {
        let hf = h.to_f64();
        let w = hf - (1.0 - hf) / (factorial(n) as f64 - 1.0);
        Ok(CoherenceResult::from_value(w, Method::ExactProduct, n))
    } else {
        Ok(CoherenceResult::from_scaled(h, Method::Spectral, n))
    }
}

/// Coherence of the reduced `k`-particle external state of `N` particles.
/// For product internal states it does not depend on `N`.
pub fn coherence_reduced(spec: &Spectrum, n: usize, k: usize) -> Result<CoherenceResult> {
    require_order(k)?;
    if k > n {
        return Err(Error::Domain(format!(
            "reduced order k = {k} exceeds particle number N = {n}"
        )));
    }
    let mut r = coherence_spectral(spec, k)?;
    r.n = n;
    r.k = k;
    Ok(r)
}

/// `ln C(a, b)` as a sum of logarithms over the shorter side.
pub fn ln_binomial(a: u64, b: u64) -> f64 {
    if b > a {
        return f64::NEG_INFINITY;
    }
    let b = b.min(a - b);
    (1..=b).map(|i| ((a - b + i) as f64 / i as f64).ln()).sum()
}

/// `C(N+m-1, m-1) / m^N`, the coherence for a maximally mixed `ρ1p` in the
/// `N! ≫ 1` form.
pub fn coherence_maximally_mixed(m: usize, n: usize) -> Result<CoherenceResult> {
    if m == 0 {
        return Err(Error::Domain(
            "internal dimension must be at least 1".into(),
        ));
    }
    require_order(n)?;
    let ln = ln_binomial((n + m - 1) as u64, (m - 1) as u64) - n as f64 * (m as f64).ln();
    Ok(CoherenceResult::from_ln(ln, Method::Asymptote, n))
}

/// Large-`N` asymptote
/// `C(N+d-1, d-1) · λ_max^N · Π_{λ_j < λ_max} (1 - λ_j/λ_max)^{-1}`,
/// with `d` the multiplicity of `λ_max` under `degeneracy_tol`.
pub fn coherence_asymptote(
    spec: &Spectrum,
    n: usize,
    degeneracy_tol: f64,
) -> Result<CoherenceResult> {
    require_order(n)?;
    let top = spec.lambda_max();
    if top >= 1.0 - 1e-15 {
        return Err(Error::Regime(
            "asymptote requires λ_max < 1; a pure single-particle state has W_C = 1 exactly".into(),
        ));
    }
    let d = spec.degeneracy(degeneracy_tol);
    let mut ln = n as f64 * top.ln() + ln_binomial((n + d - 1) as u64, (d - 1) as u64);
    for &lambda in &spec.values()[d..] {
        ln -= (-lambda / top).ln_1p();
    }
    Ok(CoherenceResult::from_ln(ln, Method::Asymptote, n))
}

/// `(1 - ε)^N`, valid for faint distinguishability `ε ≪ 1/2`.
pub fn coherence_faint(epsilon: f64, n: usize) -> Result<CoherenceResult> {
    require_order(n)?;
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::Regime(format!(
            "faint approximation requires 0 <= ε < 1/2 (ε ≪ 1/2), got ε = {epsilon}"
        )));
    }
    Ok(CoherenceResult::from_ln(
        n as f64 * (-epsilon).ln_1p(),
        Method::Faint,
        n,
    ))
}

/// `(1/N!) Σ_{π∈S_N} Π_{cycles c} p_{|c|}`, which equals `h_N`.
pub fn oracle_power_sum(spec: &Spectrum, n: usize, exec: Execution) -> Result<f64> {
    let perms = symgroup::all(n)?;
    let power_sums: Vec<f64> = (0..=n as u32).map(|l| spec.power_sum(l)).collect();
    let total = exec::sum(exec, &perms, |p| {
        p.cycle_type()
            .lengths()
            .iter()
            .map(|&l| power_sums[l])
            .product::<f64>()
    });
    Ok(total / perms.len() as f64)
}
