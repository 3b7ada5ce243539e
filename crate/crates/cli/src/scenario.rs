//! Scenario execution. Independent sweep points run on a rayon pool; results
//! are collected in axis order so the output does not depend on scheduling.

use rayon::prelude::*;

use dipolar_qb::battery;
use dipolar_qb::dynamics::{charge_trajectory, evolve_lindblad};
use dipolar_qb::linalg::SortOrder;
use dipolar_qb::model::{self, EtaForm};
use dipolar_qb::resources::{self, DiscordOptions};
use dipolar_qb::{thermal, DensityMatrix, ModelParams};

use crate::config::{AxisSpec, InitialState, Scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::output::Table;

fn axis_name(axis: &AxisSpec) -> String {
    axis.name.to_string()
}

/// `(value, params)` for each point of an optional axis; a single
/// unmodified point when absent.
fn axis_points(base: ModelParams, axis: Option<&AxisSpec>) -> Vec<(Option<f64>, ModelParams)> {
    match axis {
        None => vec![(None, base)],
        Some(a) => a.points().into_iter().map(|v| (Some(v), base.with(a.name, v))).collect(),
    }
}

fn check(p: &ModelParams) -> CliResult<()> {
    p.validate()
        .map_err(|e| CliError::Config(format!("parameters: {e}")))
}

fn context(p: &ModelParams) -> String {
    format!(
        "delta={} epsilon={} dm={} ksea={} field={} temperature={} gamma={} omega={}",
        p.delta, p.epsilon, p.dm, p.ksea, p.field, p.temperature, p.gamma, p.omega
    )
}

fn reject_second_axis(cfg: &ScenarioConfig) -> CliResult<()> {
    if cfg.second_axis.is_some() {
        return Err(CliError::Config(format!("{} takes at most one sweep axis", cfg.scenario)));
    }
    Ok(())
}

fn prefix(value: Option<f64>, rest: impl IntoIterator<Item = f64>) -> Vec<f64> {
    value.into_iter().chain(rest).collect()
}

pub fn run(cfg: &ScenarioConfig) -> CliResult<Table> {
    cfg.validate()?;
    let mut table = match cfg.scenario {
        Scenario::Spectrum => spectrum(cfg)?,
        Scenario::Gibbs => gibbs(cfg)?,
        Scenario::Dephasing => dephasing(cfg)?,
        Scenario::ThermalSweep => thermal_sweep(cfg)?,
        Scenario::Charge => charge(cfg)?,
        Scenario::Grid2d => grid2d(cfg)?,
    };
    table.select(&cfg.outputs)?;
    Ok(table)
}

/// Run on a dedicated pool of `jobs` threads.
pub fn run_with_jobs(cfg: &ScenarioConfig, jobs: usize) -> CliResult<Table> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| run(cfg))
}

fn spectrum(cfg: &ScenarioConfig) -> CliResult<Table> {
    reject_second_axis(cfg)?;
    let points = axis_points(cfg.params, cfg.sweep.as_ref());
    let mut table = Table::new(
        cfg.sweep.iter().map(axis_name).collect(),
        &[
            "nu1",
            "nu2",
            "nu3",
            "nu4",
            "cf_nu1",
            "cf_nu2",
            "cf_nu3",
            "cf_nu4",
            "max_value_deviation",
            "vector_residual",
            "naive_vector_residual",
        ],
    );
    table.rows = points
        .par_iter()
        .map(|(v, p)| {
            check(p)?;
            let h = model::build_hamiltonian(p);
            let numeric = dipolar_qb::linalg::hermitian_eigen(&h, SortOrder::Ascending)
                .map_err(CliError::numeric(context(p)))?;
            let cf = model::closed_form_spectrum(p);
            let sorted = cf.sorted_values();
            let dev = sorted
                .iter()
                .zip(&numeric.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let naive = model::closed_form_spectrum_with(p, EtaForm::Naive).max_residual(&h);
            Ok(prefix(
                *v,
                numeric
                    .values
                    .iter()
                    .copied()
                    .chain(sorted)
                    .chain([dev, cf.max_residual(&h), naive]),
            ))
        })
        .collect::<CliResult<_>>()?;
    Ok(table)
}

fn gibbs(cfg: &ScenarioConfig) -> CliResult<Table> {
    reject_second_axis(cfg)?;
    let points = axis_points(cfg.params, cfg.sweep.as_ref());
    let mut table = Table::new(
        cfg.sweep.iter().map(axis_name).collect(),
        &[
            "z11",
            "z22",
            "z33",
            "z44",
            "z14_re",
            "z14_im",
            "z23_re",
            "z23_im",
            "max_entry_deviation",
            "max_eigenvalue_deviation",
            "closed_form_vector_residual",
        ],
    );
    table.rows = points
        .par_iter()
        .map(|(v, p)| {
            check(p)?;
            let err = CliError::numeric(context(p));
            let zeta = thermal::gibbs_numeric(p).map_err(&err)?;
            let closed = thermal::gibbs_closed_form(p)
                .map_err(CliError::numeric(context(p)))?
                .to_matrix();
            let spec = thermal::gibbs_spectrum(p).map_err(CliError::numeric(context(p)))?;
            let z = zeta.matrix();
            Ok(prefix(
                *v,
                [
                    z[(0, 0)].re,
                    z[(1, 1)].re,
                    z[(2, 2)].re,
                    z[(3, 3)].re,
                    z[(0, 3)].re,
                    z[(0, 3)].im,
                    z[(1, 2)].re,
                    z[(1, 2)].im,
                    closed.max_abs_diff(z),
                    spec.max_value_deviation,
                    spec.eigenvector_residual.unwrap_or(f64::NAN),
                ],
            ))
        })
        .collect::<CliResult<_>>()?;
    Ok(table)
}

fn initial_state(cfg: &ScenarioConfig, p: &ModelParams) -> CliResult<DensityMatrix> {
    Ok(match cfg.initial {
        InitialState::Ground => DensityMatrix::basis(0),
        InitialState::Bell => DensityMatrix::bell_phi_plus(),
        InitialState::Gibbs => thermal::gibbs_numeric(p).map_err(CliError::numeric(context(p)))?,
    })
}

fn discord_options(cfg: &ScenarioConfig) -> DiscordOptions {
    DiscordOptions {
        side: cfg.measure_side,
        ..DiscordOptions::default()
    }
}

fn dephasing(cfg: &ScenarioConfig) -> CliResult<Table> {
    reject_second_axis(cfg)?;
    let mut axes: Vec<String> = cfg.sweep.iter().map(axis_name).collect();
    axes.push("t".into());
    let mut table = Table::new(axes, &["concurrence", "discord", "coherence"]);
    let opts = discord_options(cfg);
    for (v, p) in axis_points(cfg.params, cfg.sweep.as_ref()) {
        check(&p)?;
        let rho0 = initial_state(cfg, &p)?;
        let traj = evolve_lindblad(&p, &rho0, &cfg.grid).map_err(CliError::numeric(context(&p)))?;
        let rows: Vec<Vec<f64>> = traj
            .times
            .par_iter()
            .zip(&traj.states)
            .map(|(&t, rho)| {
                prefix(
                    v,
                    [
                        t,
                        resources::concurrence(rho),
                        resources::quantum_discord_with(rho, opts).discord,
                        resources::l1_coherence(rho),
                    ],
                )
            })
            .collect();
        table.rows.extend(rows);
    }
    Ok(table)
}

fn thermal_sweep(cfg: &ScenarioConfig) -> CliResult<Table> {
    let x_axis = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("thermal-sweep needs a sweep axis (usually temperature)".into()))?;
    let mut axes: Vec<String> = cfg.second_axis.iter().map(axis_name).collect();
    axes.push(axis_name(x_axis));
    let mut table = Table::new(axes, &["concurrence", "discord", "coherence"]);
    let opts = discord_options(cfg);
    let points: Vec<(Option<f64>, f64, ModelParams)> = axis_points(cfg.params, cfg.second_axis.as_ref())
        .into_iter()
        .flat_map(|(legend, base)| {
            x_axis
                .points()
                .into_iter()
                .map(move |x| (legend, x, base.with(x_axis.name, x)))
        })
        .collect();
    table.rows = points
        .par_iter()
        .map(|(legend, x, p)| {
            check(p)?;
            let zeta = thermal::gibbs_numeric(p).map_err(CliError::numeric(context(p)))?;
            Ok(prefix(
                *legend,
                [
                    *x,
                    resources::concurrence(&zeta),
                    resources::quantum_discord_with(&zeta, opts).discord,
                    resources::l1_coherence(&zeta),
                ],
            ))
        })
        .collect::<CliResult<_>>()?;
    Ok(table)
}

fn charge(cfg: &ScenarioConfig) -> CliResult<Table> {
    reject_second_axis(cfg)?;
    let mut axes: Vec<String> = cfg.sweep.iter().map(axis_name).collect();
    axes.push("omega_t".into());
    let mut metrics = vec!["ergotropy", "power_instant", "capacity_basis", "capacity_unitary", "coherence"];
    if cfg.with_discord {
        metrics.push("discord");
    }
    let mut table = Table::new(axes, &metrics);
    let opts = discord_options(cfg);
    let points = axis_points(cfg.params, cfg.sweep.as_ref());
    let blocks = points
        .par_iter()
        .map(|(v, p)| -> CliResult<Vec<Vec<f64>>> {
            check(p)?;
            let numeric = CliError::numeric(context(p));
            let zeta = thermal::gibbs_numeric(p).map_err(&numeric)?;
            let traj = charge_trajectory(p, &zeta, &cfg.grid, cfg.ordering).map_err(&numeric)?;
            let series = battery::work_and_power(&traj, p, cfg.ordering).map_err(&numeric)?;
            let h = model::build_hamiltonian(p);
            let cap_basis = battery::capacity(p).map_err(&numeric)?.capacity_basis;
            let xi = series.column("ergotropy").unwrap_or_default();
            let power = series.column("power_instant").unwrap_or_default();
            let coh = series.column("coherence").unwrap_or_default();
            traj.states
                .par_iter()
                .enumerate()
                .map(|(k, rho)| {
                    let cap_u = battery::unitary_capacity(rho, &h).map_err(CliError::numeric(context(p)))?;
                    let mut row = prefix(*v, [p.omega * traj.times[k], xi[k], power[k], cap_basis, cap_u, coh[k]]);
                    if cfg.with_discord {
                        row.push(resources::quantum_discord_with(rho, opts).discord);
                    }
                    Ok(row)
                })
                .collect()
        })
        .collect::<CliResult<Vec<_>>>()?;
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}

fn grid2d(cfg: &ScenarioConfig) -> CliResult<Table> {
    let (xa, ya) = match (&cfg.sweep, &cfg.second_axis) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(CliError::Config("grid2d needs both sweep and sweep2".into())),
    };
    let mut table = Table::new(
        vec![axis_name(xa), axis_name(ya)],
        &["capacity", "coherence_max", "ergotropy_max", "power_max"],
    );
    let cells: Vec<(f64, f64)> = xa
        .points()
        .into_iter()
        .flat_map(|x| ya.points().into_iter().map(move |y| (x, y)))
        .collect();
    table.rows = cells
        .par_iter()
        .map(|&(x, y)| {
            let p = cfg.params.with(xa.name, x).with(ya.name, y);
            check(&p)?;
            let peaks = battery::peak_metrics(&p, cfg.ordering).map_err(CliError::numeric(context(&p)))?;
            Ok(vec![
                x,
                y,
                peaks.capacity_unitary,
                peaks.coherence_max,
                peaks.ergotropy_max,
                peaks.power_max,
            ])
        })
        .collect::<CliResult<_>>()?;
    Ok(table)
}
