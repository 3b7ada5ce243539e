//! Time evolution: Lindblad dynamics with σˣ collapse operators on each
//! spin, and closed unitary charging.

use crate::error::{Error, Result};
use crate::linalg::{self, pauli, ComplexMatrix, SortOrder, C64};
use crate::model::{self, ModelParams};
use crate::state::DensityMatrix;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SAMPLES: usize = 1000;
const MAX_STEPS: f64 = 1e7;
/// Largest trace drift or negative eigenvalue tolerated at a stored sample.
pub const INTEGRATION_TOL: f64 = 1e-6;

/// Uniform integration grid on `[t0, t1]` with at most `samples` stored
/// states (plus the initial one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self> {
        let grid = TimeGrid {
            t0,
            t1,
            dt,
            samples: DEFAULT_SAMPLES,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t1.is_finite() && self.dt.is_finite()) {
            return Err(Error::Grid("non-finite bounds".into()));
        }
        if self.dt <= 0.0 {
            return Err(Error::Grid(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.t1 <= self.t0 {
            return Err(Error::Grid(format!(
                "t1 ({}) must exceed t0 ({})",
                self.t1, self.t0
            )));
        }
        if (self.t1 - self.t0) / self.dt > MAX_STEPS {
            return Err(Error::Grid(format!(
                "{} steps exceeds the limit of 1e7",
                (self.t1 - self.t0) / self.dt
            )));
        }
        if self.samples == 0 {
            return Err(Error::Grid("samples must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of integration steps; the step is shrunk so they tile the span.
    pub fn step_count(&self) -> usize {
        (((self.t1 - self.t0) / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    pub fn step(&self) -> f64 {
        (self.t1 - self.t0) / self.step_count() as f64
    }

    pub fn sample_stride(&self) -> usize {
        self.step_count().div_ceil(self.samples).max(1)
    }

    /// Step indices at which a state is stored: every stride-th step and
    /// always the last.
    pub fn sample_steps(&self) -> Vec<usize> {
        let n = self.step_count();
        let stride = self.sample_stride();
        let mut steps: Vec<usize> = (0..=n).step_by(stride).collect();
        if *steps.last().unwrap() != n {
            steps.push(n);
        }
        steps
    }

    pub fn time_at(&self, step: usize) -> f64 {
        if step == self.step_count() {
            self.t1
        } else {
            self.t0 + step as f64 * self.step()
        }
    }

    pub fn sample_times(&self) -> Vec<f64> {
        self.sample_steps()
            .into_iter()
            .map(|k| self.time_at(k))
            .collect()
    }
}

/// Ordered samples of named real metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("times must be strictly increasing".into()));
        }
        Ok(TimeSeries {
            times,
            columns: Vec::new(),
        })
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::Validation(format!(
                "column '{name}' has {} values for {} times",
                values.len(),
                self.times.len()
            )));
        }
        if self.columns.iter().any(|(n, _)| *n == name) {
            return Err(Error::Validation(format!("duplicate column '{name}'")));
        }
        self.columns.push((name, values));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// States sampled along a trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Largest `|Tr ρ − 1|` seen at a sample before renormalization.
    pub max_trace_drift: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(&self.states)
    }
}

/// Lindblad generator `𝓛ρ = −i[H, ρ] + Σ_k (C_k ρ C_k† − ½{C_k†C_k, ρ})`.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: ComplexMatrix,
    collapse: Vec<ComplexMatrix>,
    collapse_adj: Vec<ComplexMatrix>,
    decay: ComplexMatrix,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: ComplexMatrix, collapse: Vec<ComplexMatrix>) -> Self {
        let n = hamiltonian.dim();
        let collapse_adj: Vec<ComplexMatrix> = collapse.iter().map(|c| c.adjoint()).collect();
        let mut decay = ComplexMatrix::zeros(n);
        for (c, cd) in collapse.iter().zip(&collapse_adj) {
            decay = &decay + &(cd * c);
        }
        LindbladGenerator {
            hamiltonian,
            collapse,
            collapse_adj,
            decay: decay.scale_real(0.5),
        }
    }

    /// Battery Hamiltonian with `C₁ = √γ σˣ⊗𝟙`, `C₂ = √γ 𝟙⊗σˣ`.
    pub fn for_model(p: &ModelParams) -> Self {
        let root = p.gamma.sqrt();
        let (x, id) = (pauli::x(), pauli::identity());
        Self::new(
            model::build_hamiltonian(p),
            vec![x.kron(&id).scale_real(root), id.kron(&x).scale_real(root)],
        )
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.hamiltonian.commutator(rho).scale(C64::new(0.0, -1.0));
        for (c, cd) in self.collapse.iter().zip(&self.collapse_adj) {
            out = &out + &(&(c * rho) * cd);
        }
        &out - &self.decay.anticommutator(rho)
    }
}

/// `dρ/dt` for the battery with dephasing.
pub fn lindblad_rhs(p: &ModelParams, rho: &DensityMatrix) -> ComplexMatrix {
    LindbladGenerator::for_model(p).apply(rho.matrix())
}

fn axpy(y: &ComplexMatrix, a: f64, x: &ComplexMatrix) -> ComplexMatrix {
    y + &x.scale_real(a)
}

fn rk4_step(gen: &LindbladGenerator, rho: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let k1 = gen.apply(rho);
    let k2 = gen.apply(&axpy(rho, 0.5 * h, &k1));
    let k3 = gen.apply(&axpy(rho, 0.5 * h, &k2));
    let k4 = gen.apply(&axpy(rho, h, &k3));
    let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_real(2.0);
    axpy(rho, h / 6.0, &incr)
}

/// Hermitize, renormalize and check a stored integrator state; also
/// returns the trace drift that was removed.
fn checked_sample(rho: &ComplexMatrix, time: f64) -> Result<(ComplexMatrix, f64)> {
    let rho = rho.hermitized();
    let trace = rho.trace().re;
    if !trace.is_finite() || (trace - 1.0).abs() > INTEGRATION_TOL {
        return Err(Error::Integration {
            time,
            detail: format!("trace drifted to {trace}"),
        });
    }
    let rho = rho.scale_real(1.0 / trace);
    let eig = linalg::hermitian_eigen(&rho, SortOrder::Ascending)?;
    if eig.values[0] < -INTEGRATION_TOL {
        return Err(Error::Integration {
            time,
            detail: format!("eigenvalue {:e} below positivity floor", eig.values[0]),
        });
    }
    Ok((rho, (trace - 1.0).abs()))
}

/// Integrate the master equation with fixed-step RK4.
pub fn evolve_lindblad(
    p: &ModelParams,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    evolve_with(&LindbladGenerator::for_model(p), rho0, grid)
}

/// Fixed-step RK4 for an arbitrary generator.
pub fn evolve_with(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    grid.validate()?;
    let n = grid.step_count();
    let h = grid.step();
    let stride = grid.sample_stride();

    let mut times = vec![grid.t0];
    let mut states = vec![rho0.clone()];
    let mut rho = rho0.matrix().clone();
    let mut max_trace_drift: f64 = 0.0;
    for k in 1..=n {
        rho = rk4_step(gen, &rho, h);
        if k % stride == 0 || k == n {
            let t = grid.time_at(k);
            let (clean, drift) = checked_sample(&rho, t)?;
            rho = clean;
            max_trace_drift = max_trace_drift.max(drift);
            times.push(t);
            states.push(DensityMatrix::with_tolerances(
                rho.clone(),
                crate::state::DEFAULT_TRACE_TOL,
                INTEGRATION_TOL,
            )?);
        }
    }
    Ok(Trajectory {
        times,
        states,
        max_trace_drift,
    })
}

/// Conjugation convention for the charging unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChargeOrdering {
    /// `ρ(t) = U ρ(0) U†`, Schrödinger-picture propagation.
    #[default]
    Forward,
    /// `ρ(t) = U† ρ(0) U`.
    Adjoint,
}

impl ChargeOrdering {
    /// Sign `s` in `dρ/dt = s·(−i)[H_ch, ρ]`.
    pub fn generator_sign(self) -> f64 {
        match self {
            ChargeOrdering::Forward => 1.0,
            ChargeOrdering::Adjoint => -1.0,
        }
    }
}

/// State after unitary charging for time `t`.
pub fn charged_state(
    p: &ModelParams,
    rho0: &ComplexMatrix,
    t: f64,
    ordering: ChargeOrdering,
) -> ComplexMatrix {
    let u = model::charging_unitary(p, t);
    match ordering {
        ChargeOrdering::Forward => rho0.conjugate_by(&u),
        ChargeOrdering::Adjoint => rho0.conjugate_by(&u.adjoint()),
    }
}

/// Unitary charging trajectory sampled on the grid's sample times.
pub fn charge_trajectory(
    p: &ModelParams,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    ordering: ChargeOrdering,
) -> Result<Trajectory> {
    grid.validate()?;
    let times = grid.sample_times();
    let mut max_trace_drift: f64 = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &t in &times {
        let rho = charged_state(p, rho0.matrix(), t, ordering).hermitized();
        max_trace_drift = max_trace_drift.max((rho.trace().re - 1.0).abs());
        states.push(DensityMatrix::new(rho)?);
    }
    Ok(Trajectory {
        times,
        states,
        max_trace_drift,
    })
}
