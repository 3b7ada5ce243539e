//! Battery performance: passive states, ergotropy, work, power, efficiency
//! and capacity, plus closed-form expressions used as cross-checks.

use std::f64::consts::PI;

use crate::dynamics::{self, ChargeOrdering, TimeSeries, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, SortOrder, SpectralDecomposition, C64};
use crate::model::{self, ModelParams};
use crate::optimize;
use crate::resources;
use crate::state::DensityMatrix;
use crate::thermal;

/// Step of the central finite difference used to cross-check `𝒫`.
pub const POWER_FD_STEP: f64 = 1e-4;
/// Points of the uniform scan in `Ωt ∈ [0, π]` for peak extraction.
pub const PEAK_SCAN_POINTS: usize = 2000;
/// Width in `Ωt` at which the golden-section refinement stops.
pub const PEAK_TOL: f64 = 1e-8;
/// Ergotropy below `EFFICIENCY_FLOOR · (1 + max|ν|)` is treated as zero
/// when forming `η = 𝒲/ξ`, and `η` is reported as 1.
pub const EFFICIENCY_FLOOR: f64 = 1e-6;

fn energy(rho: &ComplexMatrix, h: &ComplexMatrix) -> f64 {
    rho.trace_product(h).re
}

fn eigen(m: &ComplexMatrix, order: SortOrder) -> Result<SpectralDecomposition> {
    linalg::hermitian_eigen(m, order)
}

/// Populations of `rho` in descending order with matching eigenvectors,
/// paired with the eigenvectors of `h` in the requested order.
fn paired_state(rho: &DensityMatrix, h: &ComplexMatrix, energy_order: SortOrder) -> Result<DensityMatrix> {
    let pops = rho.spectrum(SortOrder::Descending).values;
    let levels = eigen(h, energy_order)?;
    let mut out = ComplexMatrix::zeros(h.dim());
    for (p, v) in pops.iter().zip(&levels.vectors) {
        out = &out + &ComplexMatrix::projector(v)?.scale_real(p.max(0.0));
    }
    DensityMatrix::with_tolerances(out.hermitized(), rho.trace_tol(), rho.psd_tol())
}

/// Spectrum-preserving state of least energy.
pub fn passive_state(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<DensityMatrix> {
    paired_state(rho, h, SortOrder::Ascending)
}

/// Spectrum-preserving state of greatest energy.
pub fn antipassive_state(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<DensityMatrix> {
    paired_state(rho, h, SortOrder::Descending)
}

/// `Σ p↓ ν` with energies in the given order; this is the energy of the
/// passive (ascending) or anti-passive (descending) state.
fn paired_energy(pops_desc: &[f64], h: &ComplexMatrix, energy_order: SortOrder) -> Result<f64> {
    let levels = eigen(h, energy_order)?;
    Ok(pops_desc.iter().zip(&levels.values).map(|(p, e)| p * e).sum())
}

/// Maximal work extractable by a cyclic unitary: `Tr[ρH] − Tr[πH]`.
pub fn ergotropy(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    let pops = rho.spectrum(SortOrder::Descending).values;
    Ok(energy(rho.matrix(), h) - paired_energy(&pops, h, SortOrder::Ascending)?)
}

/// Ergotropy as `Σ_mn φ_m ν_n (|⟨ψ_n|φ_m⟩|² − δ_mn)` with `φ` descending and
/// `ν` ascending.
pub fn ergotropy_double_sum(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    let states = rho.spectrum(SortOrder::Descending);
    let levels = eigen(h, SortOrder::Ascending)?;
    let mut total = 0.0;
    for (m, (phi, phi_vec)) in states.values.iter().zip(&states.vectors).enumerate() {
        for (n, (nu, psi)) in levels.values.iter().zip(&levels.vectors).enumerate() {
            let overlap = linalg::inner(psi, phi_vec).norm_sqr();
            let delta = if m == n { 1.0 } else { 0.0 };
            total += phi * nu * (overlap - delta);
        }
    }
    Ok(total)
}

/// `Tr[ρ^↑H] − Tr[ρ^↓H]` for the anti-passive and passive rearrangements
/// of `rho`.
pub fn unitary_capacity(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    let pops = rho.spectrum(SortOrder::Descending).values;
    Ok(paired_energy(&pops, h, SortOrder::Descending)? - paired_energy(&pops, h, SortOrder::Ascending)?)
}

/// `η = 𝒲/ξ`, defined as 1 when the ergotropy is below the noise floor.
pub fn efficiency(work: f64, ergotropy: f64, energy_scale: f64) -> f64 {
    if ergotropy <= EFFICIENCY_FLOOR * (1.0 + energy_scale) {
        1.0
    } else {
        work / ergotropy
    }
}

fn energy_scale(h: &ComplexMatrix) -> Result<f64> {
    Ok(eigen(h, SortOrder::Ascending)?
        .values
        .iter()
        .fold(0.0, |m, v| f64::max(m, v.abs())))
}

/// `dρ/dt` under charging for the given ordering.
fn charging_derivative(p: &ModelParams, rho: &ComplexMatrix, ordering: ChargeOrdering) -> ComplexMatrix {
    model::charging_hamiltonian(p)
        .commutator(rho)
        .scale(C64::new(0.0, -ordering.generator_sign()))
}

/// Instantaneous power `Tr[(dρ/dt) H]` along unitary charging.
pub fn instantaneous_power(p: &ModelParams, rho: &ComplexMatrix, ordering: ChargeOrdering) -> f64 {
    energy(&charging_derivative(p, rho, ordering), &model::build_hamiltonian(p))
}

/// Per-sample battery figures of merit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryMetrics {
    pub time: f64,
    pub ergotropy: f64,
    pub work: f64,
    pub power_instant: f64,
    pub power_avg: f64,
    pub efficiency: f64,
    pub coherence: f64,
}

/// Metrics along a unitary charging trajectory started from `traj.states[0]`.
///
/// Columns: `ergotropy`, `work`, `power_avg`, `power_instant`, `power_fd`
/// (central-difference check of `power_instant`), `efficiency`, `coherence`.
pub fn work_and_power(traj: &Trajectory, p: &ModelParams, ordering: ChargeOrdering) -> Result<TimeSeries> {
    let mut series = TimeSeries::new(traj.times.clone())?;
    let Some(rho0) = traj.states.first() else {
        return Ok(series);
    };
    let t0 = traj.times[0];
    let h = model::build_hamiltonian(p);
    let scale = energy_scale(&h)?;
    let e0 = energy(rho0.matrix(), &h);

    let n = traj.len();
    let mut cols: [Vec<f64>; 7] = Default::default();
    for (t, rho) in traj.iter() {
        let xi = ergotropy(rho, &h)?;
        let work = energy(rho.matrix(), &h) - e0;
        let elapsed = t - t0;
        let avg = if elapsed > 0.0 { work / elapsed } else { 0.0 };
        let fd = {
            let at = |s: f64| energy(&dynamics::charged_state(p, rho0.matrix(), s - t0, ordering), &h);
            (at(t + POWER_FD_STEP) - at(t - POWER_FD_STEP)) / (2.0 * POWER_FD_STEP)
        };
        let row = [
            xi,
            work,
            avg,
            instantaneous_power(p, rho.matrix(), ordering),
            fd,
            efficiency(work, xi, scale),
            resources::l1_coherence(rho),
        ];
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    debug_assert!(cols.iter().all(|c| c.len() == n));
    let names = ["ergotropy", "work", "power_avg", "power_instant", "power_fd", "efficiency", "coherence"];
    for (name, col) in names.into_iter().zip(cols) {
        series.push_column(name, col)?;
    }
    Ok(series)
}

/// Rows of [`work_and_power`] as structs.
pub fn metrics_rows(series: &TimeSeries) -> Result<Vec<BatteryMetrics>> {
    let col = |name: &str| {
        series
            .column(name)
            .ok_or_else(|| Error::Validation(format!("missing column '{name}'")))
    };
    let (xi, w, pi, pa, eta, c) = (
        col("ergotropy")?,
        col("work")?,
        col("power_instant")?,
        col("power_avg")?,
        col("efficiency")?,
        col("coherence")?,
    );
    Ok((0..series.len())
        .map(|k| BatteryMetrics {
            time: series.times[k],
            ergotropy: xi[k],
            work: w[k],
            power_instant: pi[k],
            power_avg: pa[k],
            efficiency: eta[k],
            coherence: c[k],
        })
        .collect())
}

/// l1 coherence at every sample of a trajectory.
pub fn charged_coherence(traj: &Trajectory) -> Result<TimeSeries> {
    let mut series = TimeSeries::new(traj.times.clone())?;
    series.push_column("coherence", traj.states.iter().map(resources::l1_coherence).collect())?;
    Ok(series)
}

/// Side-by-side capacity figures for the thermal state of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    /// `⟨11|H|11⟩ − ⟨00|H|00⟩`.
    pub capacity_basis: f64,
    /// Anti-passive minus passive energy of the Gibbs state.
    pub capacity_unitary: f64,
    /// Hyperbolic closed-form expression.
    pub closed_form: f64,
}

pub fn capacity(p: &ModelParams) -> Result<CapacityReport> {
    p.validate()?;
    let h = model::build_hamiltonian(p);
    let gibbs = thermal::gibbs_numeric(p)?;
    Ok(CapacityReport {
        capacity_basis: (h[(3, 3)] - h[(0, 0)]).re,
        capacity_unitary: unitary_capacity(&gibbs, &h)?,
        closed_form: capacity_closed_form(p),
    })
}

/// Hyperbolic functions of the thermal problem, all multiplied by a common
/// factor `e^{−M}` so nothing overflows at low temperature.
struct ScaledTerms {
    /// `U₁ e^{4Δ/3T}`, `U₂ e^{4Δ/3T}`, `V₁`, `V₂`, `e^{2Δ/T}`, each × `e^{−M}`.
    u1: f64,
    u2: f64,
    v1: f64,
    v2: f64,
    e2d: f64,
    /// `V₁/Q₂ × e^{−M}`, finite as `Q₂ → 0`.
    v1_over_q2: f64,
}

impl ScaledTerms {
    fn new(p: &ModelParams) -> Self {
        let t = p.temperature;
        let (q1, q2) = (p.kappa1(), p.kappa2());
        let a = 4.0 * p.delta / (3.0 * t);
        let u = 2.0 * q1 / (3.0 * t);
        let v = 2.0 * q2 / t;
        let d2 = 2.0 * p.delta / t;
        let m = (a + u).max(v).max(d2);
        let e = |x: f64| (x - m).exp();
        let v1_over_q2 = if v > 1e-6 {
            (e(v) - e(-v)) / (2.0 * q2)
        } else {
            // sinh(v)/q₂ = (2/T)(1 + v²/6 + …)
            (2.0 / t) * (1.0 + v * v / 6.0) * e(0.0)
        };
        ScaledTerms {
            u1: 0.5 * (e(a + u) + e(a - u)),
            u2: 0.5 * (e(a + u) - e(a - u)),
            v1: 0.5 * (e(v) - e(-v)),
            v2: 0.5 * (e(v) + e(-v)),
            e2d: e(d2),
            v1_over_q2,
        }
    }
}

/// Closed-form capacity expression in `U₁, U₂, V₁, V₂, Q₁, Q₂`, evaluated
/// literally.
pub fn capacity_closed_form(p: &ModelParams) -> f64 {
    let s = ScaledTerms::new(p);
    let (b, d) = (p.field, p.delta);
    let (q1, q2) = (p.kappa1(), p.kappa2());
    let num = 2.0 * s.u1 * (3.0 * b + 2.0 * d) + 6.0 * b * s.v2 + 2.0 * q1 * s.u2 + 6.0 * q2 * s.v1;
    num / (3.0 * (s.u1 + s.v2))
}

/// Sign conventions under which the closed-form ergotropy may be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormConvention {
    /// As written.
    AsWritten,
    /// Complex conjugate (equivalently `D → −D`).
    Conjugated,
}

impl ClosedFormConvention {
    pub const ALL: [ClosedFormConvention; 2] = [ClosedFormConvention::AsWritten, ClosedFormConvention::Conjugated];
}

/// Closed-form ergotropy of the charged Gibbs state at `Ωt`, evaluated
/// literally with `Z = Tr e^{−H/T}`. Complex in general.
pub fn ergotropy_closed_form(p: &ModelParams, omega_t: f64) -> C64 {
    ergotropy_closed_form_with(p, omega_t, ClosedFormConvention::AsWritten)
}

pub fn ergotropy_closed_form_with(p: &ModelParams, omega_t: f64, convention: ClosedFormConvention) -> C64 {
    let s = ScaledTerms::new(p);
    let t = p.temperature;
    let (delta, eps, g, b) = (p.delta, p.epsilon, p.ksea, p.field);
    let dm = C64::new(0.0, p.dm);
    let s2 = (2.0 * omega_t).sin().powi(2);
    let s1 = omega_t.sin().powi(2);
    let c2 = (2.0 * omega_t).cos();

    let k = C64::new(-delta + eps, 0.0) + dm; // −Δ + iD + ε
    // e^{2(Δ−iD)/T} = e^{2Δ/T} · e^{−2iD/T}
    let phase = C64::from_polar(1.0, -2.0 * p.dm / t);
    let bracket = k * s2 * s.v2 - k * s.e2d * phase * s2
        + 2.0 * s1 * s.v1_over_q2 * (C64::new(2.0 * b * b + 2.0 * g * g, 0.0) + eps * k * (1.0 + c2));
    // 2e^{−2Δ/3T}/Z with Z = 2e^{2Δ/3T}U₁ + 2e^{−2Δ/3T}V₂ reduces to
    // 1/(U₁e^{4Δ/3T} + V₂); both carry the same e^{−M}.
    let value = bracket / (s.u1 + s.v2);
    match convention {
        ClosedFormConvention::AsWritten => value,
        ClosedFormConvention::Conjugated => value.conj(),
    }
}

/// Ergotropy of the Gibbs state of `p` after charging for `Ωt`, as
/// `Tr[(ρ(t) − ζ)H]`.
pub fn charged_gibbs_ergotropy(p: &ModelParams, omega_t: f64, ordering: ChargeOrdering) -> Result<f64> {
    let h = model::build_hamiltonian(p);
    let zeta = thermal::gibbs_numeric(p)?;
    let t = if p.omega != 0.0 { omega_t / p.omega } else { 0.0 };
    let rho = dynamics::charged_state(p, zeta.matrix(), t, ordering);
    Ok(energy(&rho, &h) - energy(zeta.matrix(), &h))
}

/// Extremes of the charging figures of merit over one period `Ωt ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakMetrics {
    pub capacity_unitary: f64,
    pub ergotropy_max: f64,
    pub ergotropy_argmax: f64,
    pub power_max: f64,
    pub power_argmax: f64,
    pub coherence_max: f64,
    pub coherence_argmax: f64,
}

/// Maximize over a uniform scan of `Ωt ∈ [0, π]` then refine by golden
/// section around the best sample. Maxima equal to within round-off (the
/// symmetric π/4, 3π/4 pair of the axial case) resolve to the earliest.
fn scan_grid() -> (Vec<f64>, f64) {
    let n = PEAK_SCAN_POINTS;
    let step = PI / (n - 1) as f64;
    ((0..n).map(|k| k as f64 * step).collect(), step)
}

/// Maximum of `f` over `[0, π]` given its values on the scan grid: the best
/// grid point (earliest on ties) is refined by golden-section search over the
/// two neighbouring intervals.
fn scan_max(values: &[f64], step: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = values.len();
    let (mut best_k, mut best) = (0, f64::NEG_INFINITY);
    for (k, &v) in values.iter().enumerate() {
        if v > best + 1e-12 * (1.0 + best.abs()) || best == f64::NEG_INFINITY {
            best = v;
            best_k = k;
        }
    }
    let lo = best_k.saturating_sub(1) as f64 * step;
    let hi = ((best_k + 1).min(n - 1)) as f64 * step;
    let refined = optimize::golden_section_max(&f, lo, hi, PEAK_TOL);
    if refined.value > best {
        (refined.x, refined.value)
    } else {
        (best_k as f64 * step, best)
    }
}

/// Peak ergotropy, power and coherence of the charged Gibbs state.
pub fn peak_metrics(p: &ModelParams, ordering: ChargeOrdering) -> Result<PeakMetrics> {
    p.validate()?;
    let h = model::build_hamiltonian(p);
    let zeta = thermal::gibbs_numeric(p)?;
    let e0 = energy(zeta.matrix(), &h);
    let capacity_unitary = unitary_capacity(&zeta, &h)?;
    let omega = p.omega;
    let state_at = |omega_t: f64| {
        let t = if omega != 0.0 { omega_t / omega } else { 0.0 };
        dynamics::charged_state(p, zeta.matrix(), t, ordering)
    };
    let coherence = |m: &ComplexMatrix| {
        let mut total = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    total += m[(i, j)].norm();
                }
            }
        }
        total
    };

    let work = |m: &ComplexMatrix| energy(m, &h) - e0;
    let power = |m: &ComplexMatrix| instantaneous_power(p, m, ordering);

    // One pass over the grid feeds all three scans.
    let (grid, step) = scan_grid();
    let n = grid.len();
    let (mut w, mut pw, mut c) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for &x in &grid {
        let m = state_at(x);
        w.push(work(&m));
        pw.push(power(&m));
        c.push(coherence(&m));
    }
    let (ergotropy_argmax, ergotropy_max) = scan_max(&w, step, |x| work(&state_at(x)));
    let (power_argmax, power_max) = scan_max(&pw, step, |x| power(&state_at(x)));
    let (coherence_argmax, coherence_max) = scan_max(&c, step, |x| coherence(&state_at(x)));
    Ok(PeakMetrics {
        capacity_unitary,
        ergotropy_max,
        ergotropy_argmax,
        power_max,
        power_argmax,
        coherence_max,
        coherence_argmax,
    })
}
