//! Photons with random arrival times.
//!
//! Each photon is a Gaussian wavepacket of spectral width `Δ` arriving at a
//! random time `t ~ P(t)`, so `ρ1p = ∫ dt P(t) |t⟩⟨t|` with
//! `|⟨t|t'⟩| = e^{-Δ²(t-t')²/2}`. Times are measured in units of the arrival
//! spread `σ` around the mean, leaving the single parameter `σΔ`.
//!
//! The nonzero spectrum of `ρ1p` coincides with that of the integral kernel
//! `√P(t) ⟨t|t'⟩ √P(t')`. The carrier phase `e^{iΩ(t'-t)}` is removed by a
//! diagonal unitary, so the real kernel suffices. The kernel is discretized by
//! Gauss-Legendre quadrature (Nyström) and diagonalized densely.

use std::path::Path;

use nalgebra::DMatrix;

use crate::coherence::{coherence_spectral, CoherenceResult};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::state::{Spectrum, NEGATIVE_CLAMP};

pub const DEFAULT_QUAD_POINTS: usize = 200;
pub const DEFAULT_WINDOW: f64 = 8.0;
pub const MIN_QUAD_POINTS: usize = 16;
pub const MIN_WINDOW: f64 = 5.0;
/// Largest tolerated deviation of the discretized trace from 1.
pub const TRACE_TOL: f64 = 1e-6;
/// Eigenvalues at or below this are discarded before renormalizing.
pub const EIGEN_CUTOFF: f64 = 1e-14;
/// Nodes needed per unit of `σΔ × window halfwidth` to resolve the kernel.
pub const NODES_PER_RESOLUTION: f64 = 5.0;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Arrival-time density tabulated at points `(t, P(t))`, interpolated
/// linearly, renormalized, and shifted/scaled to zero mean and unit variance.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedDensity {
    x: Vec<f64>,
    p: Vec<f64>,
    mean: f64,
    std: f64,
}

impl TabulatedDensity {
    pub fn new(t: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if t.len() != p.len() {
            return Err(Error::Dimension {
                expected: t.len(),
                found: p.len(),
            });
        }
        if t.len() < 2 {
            return Err(Error::Validation(
                "density table needs at least two rows".into(),
            ));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) || t.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(
                "density times must be finite and strictly increasing".into(),
            ));
        }
        if p.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::Validation(
                "density values must be finite and non-negative".into(),
            ));
        }
        // exact moments of the piecewise-linear interpolant
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for i in 0..t.len() - 1 {
            let (a, b, pa, pb) = (t[i], t[i + 1], p[i], p[i + 1]);
            let h = b - a;
            m0 += h * (pa + pb) / 2.0;
            m1 += h / 6.0 * (pa * (2.0 * a + b) + pb * (a + 2.0 * b));
            m2 += h / 12.0
                * (pa * (3.0 * a * a + 2.0 * a * b + b * b)
                    + pb * (a * a + 2.0 * a * b + 3.0 * b * b));
        }
        if m0 <= 0.0 {
            return Err(Error::Validation("density integrates to zero".into()));
        }
        let mean = m1 / m0;
        let var = m2 / m0 - mean * mean;
        if var <= 0.0 {
            return Err(Error::Validation("density has zero spread".into()));
        }
        let std = var.sqrt();
        Ok(TabulatedDensity {
            x: t.iter().map(|v| (v - mean) / std).collect(),
            p: p.iter().map(|v| v * std / m0).collect(),
            mean,
            std,
        })
    }

    /// Two whitespace- or comma-separated columns `t P(t)`; `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut t, mut p) = (Vec::new(), Vec::new());
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::Validation(format!("line {}: cannot parse {s:?}", lineno + 1))
                })
            };
            if cols.len() != 2 {
                return Err(Error::Validation(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            t.push(parse(cols[0])?);
            p.push(parse(cols[1])?);
        }
        Self::new(t, p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Mean and standard deviation of the table in its original time units.
    pub fn moments(&self) -> (f64, f64) {
        (self.mean, self.std)
    }

    /// Standardized density at standardized time `x` (zero outside the table).
    pub fn value(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x < self.x[0] || x > self.x[n - 1] {
            return 0.0;
        }
        let i = self.x.partition_point(|&v| v <= x).clamp(1, n - 1);
        let (a, b) = (self.x[i - 1], self.x[i]);
        let f = (x - a) / (b - a);
        self.p[i - 1] * (1.0 - f) + self.p[i] * f
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.windows(2).map(|w| (w[0], w[1]))
    }

    fn halfwidth(&self) -> f64 {
        self.x[0].abs().max(self.x[self.x.len() - 1].abs())
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum ArrivalDensity {
    #[default]
    Gaussian,
    Tabulated(TabulatedDensity),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhotonConfig {
    /// Arrival-time spread times spectral width, `σΔ >= 0`.
    pub sigma_delta: f64,
    pub quad_points: usize,
    /// Integration window `[-w, w]` in units of `σ` (Gaussian density only).
    pub window_halfwidth: f64,
    pub density: ArrivalDensity,
}

impl PhotonConfig {
    pub fn gaussian(sigma_delta: f64) -> Self {
        PhotonConfig {
            sigma_delta,
            quad_points: DEFAULT_QUAD_POINTS,
            window_halfwidth: DEFAULT_WINDOW,
            density: ArrivalDensity::Gaussian,
        }
    }

    pub fn with_quad_points(mut self, n: usize) -> Self {
        self.quad_points = n;
        self
    }

    pub fn with_window(mut self, halfwidth: f64) -> Self {
        self.window_halfwidth = halfwidth;
        self
    }

    pub fn with_density(mut self, density: ArrivalDensity) -> Self {
        self.density = density;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma_delta.is_finite() || self.sigma_delta < 0.0 {
            return Err(Error::Domain(format!(
                "σΔ must be finite and non-negative, got {}",
                self.sigma_delta
            )));
        }
        if self.quad_points < MIN_QUAD_POINTS {
            return Err(Error::Domain(format!(
                "at least {MIN_QUAD_POINTS} quadrature points required, got {}",
                self.quad_points
            )));
        }
        if self.window_halfwidth.is_nan() || self.window_halfwidth < MIN_WINDOW {
            return Err(Error::Domain(format!(
                "window halfwidth must be at least {MIN_WINDOW} σ, got {}",
                self.window_halfwidth
            )));
        }
        Ok(())
    }
}

/// Discretized symmetric kernel
/// `M[a,b] = √(w_a P(x_a)) √(w_b P(x_b)) e^{-(σΔ)²(x_a-x_b)²/2}`.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    matrix: DMatrix<f64>,
}

impl KernelMatrix {
    pub fn assemble(cfg: &PhotonConfig, exec: Execution) -> Result<Self> {
        cfg.validate()?;
        let (nodes, weights, density, halfwidth) = quadrature(cfg);
        let resolution = cfg.sigma_delta * halfwidth;
        let needed = (NODES_PER_RESOLUTION * resolution).ceil() as usize;
        if nodes.len() < needed {
            return Err(Error::Discretization(format!(
                "{} quadrature nodes cannot resolve σΔ = {} over a ±{halfwidth:.1}σ window; \
                 use at least {needed} nodes (--quad-points) or a narrower window",
                nodes.len(),
                cfg.sigma_delta
            )));
        }
        let amp: Vec<f64> = weights
            .iter()
            .zip(&density)
            .map(|(w, p)| (w * p).sqrt())
            .collect();
        let n = nodes.len();
        let s2 = cfg.sigma_delta * cfg.sigma_delta;
        let rows = exec::map_range(exec, n, |a| {
            (0..n)
                .map(|b| {
                    let d = nodes[a] - nodes[b];
                    amp[a] * amp[b] * (-0.5 * s2 * d * d).exp()
                })
                .collect::<Vec<_>>()
        });
        let matrix = DMatrix::from_fn(n, n, |a, b| rows[a][b]);
        Ok(KernelMatrix {
            nodes,
            weights,
            matrix,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `tr(M²)`, the purity of the discretized state.
    pub fn purity(&self) -> f64 {
        self.matrix.norm_squared()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }
}

/// Nodes, weights, density at the nodes, and the window halfwidth.
fn quadrature(cfg: &PhotonConfig) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64) {
    match &cfg.density {
        ArrivalDensity::Gaussian => {
            let (xi, wi) = gauss_legendre(cfg.quad_points);
            let l = cfg.window_halfwidth;
            let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
            let nodes: Vec<f64> = xi.iter().map(|x| x * l).collect();
            let weights = wi.iter().map(|w| w * l).collect();
            let density = nodes.iter().map(|x| norm * (-0.5 * x * x).exp()).collect();
            (nodes, weights, density, l)
        }
        ArrivalDensity::Tabulated(table) => {
            // composite rule: exact for the piecewise-linear density
            let segments = table.x.len() - 1;
            let per_segment = cfg.quad_points.div_ceil(segments).max(1);
            let (xi, wi) = gauss_legendre(per_segment);
            let (mut nodes, mut weights, mut density) = (Vec::new(), Vec::new(), Vec::new());
            for (a, b) in table.segments() {
                let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
                for (x, w) in xi.iter().zip(&wi) {
                    let t = mid + half * x;
                    nodes.push(t);
                    weights.push(w * half);
                    density.push(table.value(t));
                }
            }
            (nodes, weights, density, table.halfwidth())
        }
    }
}

/// Spectrum of `ρ1p` for the configured arrival-time distribution.
pub fn photon_spectrum(cfg: &PhotonConfig, exec: Execution) -> Result<Spectrum> {
    cfg.validate()?;
    if cfg.sigma_delta == 0.0 {
        return Ok(Spectrum::pure());
    }
    let kernel = KernelMatrix::assemble(cfg, exec)?;
    let trace = kernel.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::Discretization(format!(
            "discretized trace {trace:.3e} misses 1 by more than {TRACE_TOL:e}; \
             widen the window or add quadrature nodes"
        )));
    }
    let eig = kernel.eigenvalues();
    if let Some(&min) = eig.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < -NEGATIVE_CLAMP {
            return Err(Error::Discretization(format!(
                "kernel has a negative eigenvalue {min:e}; add quadrature nodes"
            )));
        }
    }
    let kept: Vec<f64> = eig.into_iter().filter(|&v| v > EIGEN_CUTOFF).collect();
    Spectrum::new(kept)
}

pub fn photon_coherence(cfg: &PhotonConfig, n: usize, exec: Execution) -> Result<CoherenceResult> {
    let spec = photon_spectrum(cfg, exec)?;
    coherence_spectral(&spec, n)
}

fn faint_jitter_regime(sigma_delta: f64) -> Result<()> {
    if !(0.0..std::f64::consts::FRAC_1_SQRT_2).contains(&sigma_delta) {
        return Err(Error::Regime(format!(
            "faint approximation requires σΔ ≪ 1/√2 ≈ 0.707, got σΔ = {sigma_delta}"
        )));
    }
    Ok(())
}

/// `(1 - σ²Δ²)^N`.
pub fn faint_jitter_approx(sigma_delta: f64, n: usize) -> Result<f64> {
    faint_jitter_regime(sigma_delta)?;
    Ok((n as f64 * (-sigma_delta * sigma_delta).ln_1p()).exp())
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

/// Largest jitter keeping `(1 - σ²Δ²)^N = W`: `σΔ = √(1 - W^{1/N})`.
pub fn admissible_jitter(w_target: f64, n: usize) -> Result<f64> {
    check_target(w_target, n)?;
    Ok((-(w_target.ln() / n as f64).exp_m1()).sqrt())
}

/// `σΔ ≈ √((1 - W)/N)`, valid for `σΔ ≪ 1/√N`.
pub fn admissible_jitter_simplified(w_target: f64, n: usize) -> Result<f64> {
    check_target(w_target, n)?;
    Ok(((1.0 - w_target) / n as f64).sqrt())
}
