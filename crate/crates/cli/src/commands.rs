use std::path::Path;

use mbcoh_core::coherence::{
    coherence_asymptote, coherence_faint, coherence_maximally_mixed, coherence_oracle,
    coherence_reduced, coherence_spectral, symmetric_support,
};
use mbcoh_core::exec::{self, Execution};
use mbcoh_core::external::MAX_EXTERNAL_N;
use mbcoh_core::photon::{
    admissible_jitter, admissible_jitter_simplified, faint_jitter_approx, photon_spectrum,
    ArrivalDensity, PhotonConfig, TabulatedDensity,
};
use mbcoh_core::state::{product_state, DEFAULT_DEGENERACY_TOL};
use mbcoh_core::thermal::{
    admissible_temperature, admissible_temperature_simplified, low_t_approx, thermal_spectrum,
    ThermalConfig,
};
use mbcoh_core::{CoherenceResult, Error, Result, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axis::{parse_counts, parse_reals};
use crate::cli::{
    AsymptoteArgs, CoherenceArgs, FigPhotonArgs, FigThermalArgs, MethodArg, OracleCheckArgs,
    PhotonArgs, PhotonGrid, SpectrumSource, ThermalArgs,
};
use crate::error::{CliError, CliResult};
use crate::table::{format_real, Cell, Table};

/// Largest internal dimension accepted by `oracle-check`.
pub const ORACLE_MAX_M: usize = 3;
pub const ORACLE_TOL: f64 = 1e-10;

pub enum Outcome {
    Table(Table),
    Figures(Vec<(&'static str, Table)>),
    Check {
        table: Table,
        warning: Option<String>,
        failure: Option<String>,
    },
}

fn result_cells(r: &CoherenceResult) -> [Cell; 3] {
    [r.value.into(), r.log10_value.into(), r.underflow().into()]
}

fn load_spectrum(source: &SpectrumSource) -> CliResult<Spectrum> {
    match (&source.eigenvalues, &source.spectrum_file) {
        (Some(values), _) => Ok(Spectrum::new(values.clone())?),
        (None, Some(path)) => Ok(Spectrum::load(path)?),
        (None, None) => Err(CliError::Usage(
            "one of --eigenvalues or --spectrum-file is required".into(),
        )),
    }
}

fn check_order(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::UndefinedOrder(k));
    }
    if k > n {
        return Err(Error::Domain(format!(
            "reduced order k = {k} exceeds particle number N = {n}"
        )));
    }
    Ok(())
}

fn with_orders(mut r: CoherenceResult, n: usize, k: usize) -> CoherenceResult {
    r.n = n;
    r.k = k;
    r
}

/// Coherence of a product state with single-particle spectrum `spec`.
pub fn spectrum_coherence(
    spec: &Spectrum,
    n: usize,
    k: usize,
    method: MethodArg,
    degeneracy_tol: f64,
) -> Result<CoherenceResult> {
    check_order(n, k)?;
    let r = match method {
        MethodArg::Exact => return coherence_reduced(spec, n, k),
        MethodArg::Spectral => symmetric_support(spec, k)?,
        MethodArg::Asymptote => coherence_asymptote(spec, k, degeneracy_tol)?,
        MethodArg::Faint => coherence_faint(1.0 - spec.lambda_max(), k)?,
    };
    Ok(with_orders(r, n, k))
}

pub fn coherence(args: &CoherenceArgs) -> CliResult<Outcome> {
    let spec = load_spectrum(&args.source)?;
    let k = args.k.unwrap_or(args.n);
    let r = spectrum_coherence(&spec, args.n, k, args.method, args.degeneracy_tol)?;
    let mut t = Table::new(&["N", "k", "method", "W_C", "log10_W_C", "underflow"]);
    let mut row = vec![r.n.into(), r.k.into(), r.method.as_str().into()];
    row.extend(result_cells(&r));
    t.push(row);
    Ok(Outcome::Table(t))
}

fn thermal_method(cfg: &ThermalConfig, n: usize, method: MethodArg) -> Result<CoherenceResult> {
    match method {
        MethodArg::Faint => {
            low_t_approx(cfg, n)?;
            coherence_faint(cfg.boltzmann_ratio(), n)
        }
        other => spectrum_coherence(&thermal_spectrum(cfg), n, n, other, DEFAULT_DEGENERACY_TOL),
    }
}

fn admissible_table(
    headers: &[&'static str],
    targets: &[f64],
    ns: &[usize],
    full: fn(f64, usize) -> Result<f64>,
    simplified: fn(f64, usize) -> Result<f64>,
) -> CliResult<Table> {
    let mut t = Table::new(headers);
    for &w in targets {
        for &n in ns {
            t.push(vec![
                w.into(),
                n.into(),
                full(w, n)?.into(),
                simplified(w, n)?.into(),
            ]);
        }
    }
    Ok(t)
}

fn collect_rows(blocks: Vec<Result<Vec<Vec<Cell>>>>, table: &mut Table) -> CliResult<()> {
    for block in blocks {
        for row in block? {
            table.push(row);
        }
    }
    Ok(())
}

pub fn thermal(args: &ThermalArgs, exec: Execution) -> CliResult<Outcome> {
    let ns = parse_counts(&args.n)?;
    if let Some(targets) = &args.target {
        let t = admissible_table(
            &["W_target", "N", "kbT_over_dE", "kbT_over_dE_simplified"],
            &parse_reals(targets)?,
            &ns,
            admissible_temperature,
            admissible_temperature_simplified,
        )?;
        return Ok(Outcome::Table(t));
    }
    let temps = parse_reals(args.kbt.as_deref().unwrap_or_default())?;
    let configs = temps
        .iter()
        .map(|&t| ThermalConfig::new(args.levels, t))
        .collect::<Result<Vec<_>>>()?;
    let blocks = exec::map(exec, &configs, |cfg| {
        ns.iter()
            .map(|&n| {
                let r = thermal_method(cfg, n, args.method)?;
                let mut row = vec![cfg.kbt_over_de.into(), n.into(), r.method.as_str().into()];
                row.extend(result_cells(&r));
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut t = Table::new(&[
        "kbT_over_dE",
        "N",
        "method",
        "W_C",
        "log10_W_C",
        "underflow",
    ]);
    collect_rows(blocks, &mut t)?;
    Ok(Outcome::Table(t))
}

fn photon_config(grid: &PhotonGrid, sigma_delta: f64) -> CliResult<PhotonConfig> {
    let density = match &grid.density_file {
        Some(path) => ArrivalDensity::Tabulated(TabulatedDensity::load(path)?),
        None => ArrivalDensity::Gaussian,
    };
    Ok(PhotonConfig::gaussian(sigma_delta)
        .with_quad_points(grid.quad_points)
        .with_window(grid.window)
        .with_density(density))
}

/// Spectra for every σΔ, computed in parallel, in input order.
fn photon_spectra(grid: &PhotonGrid, sigmas: &[f64], exec: Execution) -> CliResult<Vec<Spectrum>> {
    let configs = sigmas
        .iter()
        .map(|&s| photon_config(grid, s))
        .collect::<CliResult<Vec<_>>>()?;
    let spectra = exec::map(exec, &configs, |cfg| {
        photon_spectrum(cfg, Execution::Sequential)
    });
    Ok(spectra.into_iter().collect::<Result<Vec<_>>>()?)
}

fn photon_method(spec: &Spectrum, s: f64, n: usize, method: MethodArg) -> Result<CoherenceResult> {
    match method {
        MethodArg::Faint => {
            faint_jitter_approx(s, n)?;
            coherence_faint(s * s, n)
        }
        other => spectrum_coherence(spec, n, n, other, DEFAULT_DEGENERACY_TOL),
    }
}

pub fn photon(args: &PhotonArgs, exec: Execution) -> CliResult<Outcome> {
    let ns = parse_counts(&args.n)?;
    if let Some(targets) = &args.target {
        let t = admissible_table(
            &["W_target", "N", "sigma_delta", "sigma_delta_simplified"],
            &parse_reals(targets)?,
            &ns,
            admissible_jitter,
            admissible_jitter_simplified,
        )?;
        return Ok(Outcome::Table(t));
    }
    let sigmas = parse_reals(args.sigma_delta.as_deref().unwrap_or_default())?;
    let spectra = photon_spectra(&args.grid, &sigmas, exec)?;
    let mut t = Table::new(&[
        "sigma_delta",
        "N",
        "method",
        "W_C",
        "log10_W_C",
        "underflow",
    ]);
    for (&s, spec) in sigmas.iter().zip(&spectra) {
        for &n in &ns {
            let r = photon_method(spec, s, n, args.method)?;
            let mut row = vec![s.into(), n.into(), r.method.as_str().into()];
            row.extend(result_cells(&r));
            t.push(row);
        }
    }
    Ok(Outcome::Table(t))
}

pub fn asymptote(args: &AsymptoteArgs) -> CliResult<Outcome> {
    let spec = load_spectrum(&args.source)?;
    let mut t = Table::new(&[
        "N",
        "W_C",
        "log10_W_C",
        "W_C_asymptote",
        "log10_W_C_asymptote",
        "ratio",
        "underflow",
    ]);
    for n in parse_counts(&args.n)? {
        let exact = coherence_spectral(&spec, n)?;
        let asym = coherence_asymptote(&spec, n, args.degeneracy_tol)?;
        t.push(vec![
            n.into(),
            exact.value.into(),
            exact.log10_value.into(),
            asym.value.into(),
            asym.log10_value.into(),
            10f64.powf(exact.log10_value - asym.log10_value).into(),
            exact.underflow().into(),
        ]);
    }
    Ok(Outcome::Table(t))
}

/// Rows of `row(cfg, spectrum, n)` over a temperature × N grid, temperature-major.
fn thermal_sweep<F>(
    levels: usize,
    temps: &[f64],
    ns: &[usize],
    exec: Execution,
    row: F,
) -> CliResult<Vec<Vec<Cell>>>
where
    F: Fn(&ThermalConfig, &Spectrum, usize) -> Result<Vec<Cell>> + Sync + Send,
{
    let configs = temps
        .iter()
        .map(|&t| ThermalConfig::new(levels, t))
        .collect::<Result<Vec<_>>>()?;
    let blocks = exec::map(exec, &configs, |cfg| {
        let spec = thermal_spectrum(cfg);
        ns.iter()
            .map(|&n| row(cfg, &spec, n))
            .collect::<Result<Vec<_>>>()
    });
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }
    Ok(rows)
}

pub fn fig_thermal(args: &FigThermalArgs, exec: Execution) -> CliResult<Outcome> {
    let levels = args.levels;
    let sweep = |temps: &str, ns: &str| -> CliResult<(Vec<f64>, Vec<usize>)> {
        Ok((parse_reals(temps)?, parse_counts(ns)?))
    };

    let mut b = Table::new(&["kbT_over_dE", "N", "W_C", "W_C_infT"]);
    b.rows = {
        let (temps, ns) = sweep(&args.kbt, &args.n)?;
        thermal_sweep(levels, &temps, &ns, exec, |cfg, spec, n| {
            Ok(vec![
                cfg.kbt_over_de.into(),
                n.into(),
                coherence_spectral(spec, n)?.value.into(),
                coherence_maximally_mixed(levels, n)?.value.into(),
            ])
        })?
    };

    let c = admissible_table(
        &["W_target", "N", "kbT_over_dE", "kbT_over_dE_simplified"],
        &parse_reals(&args.target)?,
        &parse_counts(&args.target_n)?,
        admissible_temperature,
        admissible_temperature_simplified,
    )?;

    let mut d = Table::new(&[
        "kbT_over_dE",
        "N",
        "W_C",
        "W_C_lowT",
        "log10_W_C",
        "underflow",
    ]);
    d.rows = {
        let (temps, ns) = sweep(&args.zoom_kbt, &args.zoom_n)?;
        thermal_sweep(levels, &temps, &ns, exec, |cfg, spec, n| {
            let r = coherence_spectral(spec, n)?;
            Ok(vec![
                cfg.kbt_over_de.into(),
                n.into(),
                r.value.into(),
                low_t_approx(cfg, n).ok().into(),
                r.log10_value.into(),
                r.underflow().into(),
            ])
        })?
    };

    let mut e = Table::new(&[
        "kbT_over_dE",
        "N",
        "W_C",
        "W_C_asymptote",
        "log10_W_C",
        "log10_W_C_asymptote",
        "underflow",
    ]);
    e.rows = {
        let (temps, ns) = sweep(&args.decay_kbt, &args.decay_n)?;
        thermal_sweep(levels, &temps, &ns, exec, |cfg, spec, n| {
            let r = coherence_spectral(spec, n)?;
            let a = coherence_asymptote(spec, n, DEFAULT_DEGENERACY_TOL).ok();
            Ok(vec![
                cfg.kbt_over_de.into(),
                n.into(),
                r.value.into(),
                a.map(|a| a.value).into(),
                r.log10_value.into(),
                a.map(|a| a.log10_value).into(),
                r.underflow().into(),
            ])
        })?
    };

    Ok(Outcome::Figures(vec![
        ("fig1b", b),
        ("fig1c", c),
        ("fig1d", d),
        ("fig1e", e),
    ]))
}

pub fn fig_photon(args: &FigPhotonArgs, exec: Execution) -> CliResult<Outcome> {
    let sigmas = parse_reals(&args.sigma_delta)?;
    let ns = parse_counts(&args.n)?;
    let faint_ns = parse_counts(&args.faint_n)?;
    let spectra = photon_spectra(&args.grid, &sigmas, exec)?;
    let mut b = Table::new(&[
        "sigma_delta",
        "N",
        "W_C",
        "W_C_faint",
        "log10_W_C",
        "underflow",
    ]);
    for (&s, spec) in sigmas.iter().zip(&spectra) {
        for &n in &ns {
            let r = coherence_spectral(spec, n)?;
            let faint = if faint_ns.contains(&n) {
                faint_jitter_approx(s, n).ok()
            } else {
                None
            };
            b.push(vec![
                s.into(),
                n.into(),
                r.value.into(),
                faint.into(),
                r.log10_value.into(),
                r.underflow().into(),
            ]);
        }
    }

    let c = admissible_table(
        &["W_target", "N", "sigma_delta", "sigma_delta_simplified"],
        &parse_reals(&args.target)?,
        &parse_counts(&args.target_n)?,
        admissible_jitter,
        admissible_jitter_simplified,
    )?;

    let decay_sigmas = parse_reals(&args.decay_sigma_delta)?;
    let decay_ns = parse_counts(&args.decay_n)?;
    let spectra = photon_spectra(&args.grid, &decay_sigmas, exec)?;
    let mut d = Table::new(&["sigma_delta", "N", "W_C", "log10_W_C", "underflow"]);
    for (&s, spec) in decay_sigmas.iter().zip(&spectra) {
        for &n in &decay_ns {
            let r = coherence_spectral(spec, n)?;
            let mut row = vec![s.into(), n.into()];
            row.extend(result_cells(&r));
            d.push(row);
        }
    }

    Ok(Outcome::Figures(vec![
        ("fig2b", b),
        ("fig2c", c),
        ("fig2d", d),
    ]))
}

struct Trial {
    n: usize,
    spec: Spectrum,
}

pub fn oracle_check(args: &OracleCheckArgs, exec: Execution) -> CliResult<Outcome> {
    if args.n_max > MAX_EXTERNAL_N {
        return Err(Error::SizeLimit {
            what: "--n-max for the oracle check",
            actual: args.n_max,
            limit: MAX_EXTERNAL_N,
        }
        .into());
    }
    if args.m_max > ORACLE_MAX_M {
        return Err(Error::SizeLimit {
            what: "--m-max for the oracle check",
            actual: args.m_max,
            limit: ORACLE_MAX_M,
        }
        .into());
    }
    if args.n_max < 2 || args.m_max < 1 {
        return Err(
            Error::Domain("oracle check needs --n-max >= 2 and --m-max >= 1".into()).into(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let trials: Vec<Trial> = (0..args.trials)
        .map(|_| {
            let m = rng.gen_range(1..=args.m_max);
            let n = rng.gen_range(2..=args.n_max);
            let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();
            Trial {
                n,
                spec: Spectrum::new(raw).expect("positive weights"),
            }
        })
        .collect();
    let deviations = exec::map(exec, &trials, |t| -> Result<f64> {
        let rho = product_state(&t.spec.to_density_matrix(), t.n)?;
        let oracle = coherence_oracle(&rho, t.n, Execution::Sequential)?.value;
        Ok((oracle - coherence_spectral(&t.spec, t.n)?.value).abs())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let worst = deviations
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i);
    let max_dev = worst.map_or(0.0, |i| deviations[i]);
    let pass = max_dev < ORACLE_TOL;
    let describe = |t: &Trial| {
        let values: Vec<String> = t.spec.values().iter().map(|v| format_real(*v)).collect();
        format!("[{}]", values.join(" "))
    };
    let mut table = Table::new(&[
        "trials",
        "seed",
        "max_abs_deviation",
        "worst_N",
        "worst_spectrum",
        "pass",
    ]);
    table.push(vec![
        args.trials.into(),
        Cell::Int(args.seed),
        max_dev.into(),
        worst.map(|i| trials[i].n).into(),
        worst
            .map(|i| Cell::Text(describe(&trials[i])))
            .unwrap_or(Cell::Empty),
        pass.into(),
    ]);
    let warning =
        (args.trials == 0).then(|| "0 trials requested; the check passes vacuously".to_string());
    let failure = (!pass).then(|| {
        let i = worst.expect("failure implies a trial");
        format!(
            "max deviation {} >= {ORACLE_TOL:e} at N = {} with spectrum {}",
            format_real(max_dev),
            trials[i].n,
            describe(&trials[i])
        )
    });
    Ok(Outcome::Check {
        table,
        warning,
        failure,
    })
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}
