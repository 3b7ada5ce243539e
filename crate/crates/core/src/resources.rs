//! Quantum-resource measures: l1-norm coherence, concurrence and quantum
//! discord.

use std::f64::consts::PI;

use crate::linalg::{self, pauli, ComplexMatrix, SortOrder, Subsystem, C64, ZERO};
use crate::optimize::{self, NelderMeadOptions};
use crate::state::DensityMatrix;

/// Eigenvalues of a Hermitian matrix we constructed ourselves.
fn spectrum(m: &ComplexMatrix, order: SortOrder) -> Vec<f64> {
    linalg::hermitian_eigen(&m.hermitized(), order)
        .expect("hermitized input")
        .values
}

/// Entropy in bits with tiny negative eigenvalues clipped to zero.
fn entropy(m: &ComplexMatrix) -> f64 {
    linalg::shannon_bits(spectrum(m, SortOrder::Descending).into_iter().map(|l| l.max(0.0)))
}

fn binary_entropy(m: &ComplexMatrix) -> f64 {
    let [a, b] = linalg::eigenvalues_2x2(m);
    linalg::shannon_bits([a.max(0.0), b.max(0.0)])
}

/// Sum of absolute off-diagonal entries in the computational basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// Wootters concurrence, via the Hermitian form `√ρ ρ̃ √ρ` of the
/// spin-flipped product (same spectrum as `ρρ̃`).
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix().hermitized();
    let yy = pauli::y().kron(&pauli::y());
    let flipped = m.conj().conjugate_by(&yy);
    let sqrt_rho = linalg::hermitian_eigen(&m, SortOrder::Descending)
        .expect("hermitized input")
        .map_values(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let r = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let lambdas: Vec<f64> = spectrum(&r, SortOrder::Descending)
        .into_iter()
        .map(|l| if l < -linalg::CLIP_TOL { 0.0 } else { l.max(0.0).sqrt() })
        .collect();
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

/// Bloch angles of a projective measurement axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementDirection {
    /// Map arbitrary angles onto `θ ∈ [0, π]`, `φ ∈ [0, 2π)` describing the
    /// same axis.
    pub fn normalized(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        MeasurementDirection {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// The two projectors `(𝟙 ± n̂·σ)/2`.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let [x, y, z] = self.unit_vector();
        let n_sigma = &(&pauli::x().scale_real(x) + &pauli::y().scale_real(y)) + &pauli::z().scale_real(z);
        let id = pauli::identity();
        [
            (&id + &n_sigma).scale_real(0.5),
            (&id - &n_sigma).scale_real(0.5),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub optimal_direction: MeasurementDirection,
    pub optimizer_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Cells per axis of the coarse (θ, φ) grid.
    pub grid: usize,
    /// Number of best grid cells polished by Nelder–Mead.
    pub keep: usize,
    /// Objective tolerance of the local polish.
    pub tol: f64,
    /// Subsystem that is measured.
    pub side: Subsystem,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        DiscordOptions {
            grid: 64,
            keep: 5,
            tol: 1e-8,
            side: Subsystem::A,
        }
    }
}

/// Unnormalized state of the unmeasured qubit after outcome `proj` on the
/// measured one.
fn conditional(rho: &ComplexMatrix, proj: &ComplexMatrix, side: Subsystem) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2);
    for x in 0..2 {
        for y in 0..2 {
            let mut acc = ZERO;
            for i in 0..2 {
                for m in 0..2 {
                    acc += proj[(i, m)]
                        * match side {
                            Subsystem::A => rho[(2 * m + x, 2 * i + y)],
                            Subsystem::B => rho[(2 * x + m, 2 * y + i)],
                        };
                }
            }
            out[(x, y)] = acc;
        }
    }
    out
}

/// `S(ρ_unmeasured) − Σ p_i S(ρ_i)` for one measurement axis.
fn classical_correlation_at(
    rho: &ComplexMatrix,
    s_unmeasured: f64,
    side: Subsystem,
    theta: f64,
    phi: f64,
) -> f64 {
    let dir = MeasurementDirection { theta, phi };
    let mut conditional_entropy = 0.0;
    for proj in dir.projectors() {
        let cond = conditional(rho, &proj, side);
        let p = cond.trace().re;
        if p > 1e-14 {
            conditional_entropy += p * binary_entropy(&cond.scale_real(1.0 / p));
        }
    }
    s_unmeasured - conditional_entropy
}

/// Quantum discord with a projective measurement on subsystem A.
pub fn quantum_discord(rho: &DensityMatrix) -> DiscordResult {
    quantum_discord_with(rho, DiscordOptions::default())
}

pub fn quantum_discord_with(rho: &DensityMatrix, opts: DiscordOptions) -> DiscordResult {
    let m = rho.matrix().hermitized();
    let s_a = binary_entropy(&linalg::partial_trace(&m, Subsystem::A));
    let s_b = binary_entropy(&linalg::partial_trace(&m, Subsystem::B));
    let mutual_information = s_a + s_b - entropy(&m);
    let s_unmeasured = match opts.side {
        Subsystem::A => s_b,
        Subsystem::B => s_a,
    };
    let objective = |x: [f64; 2]| classical_correlation_at(&m, s_unmeasured, opts.side, x[0], x[1]);

    let n = opts.grid.max(1);
    let (dt, dp) = (PI / n as f64, 2.0 * PI / n as f64);
    let mut cells: Vec<(f64, [f64; 2])> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = [(i as f64 + 0.5) * dt, (j as f64 + 0.5) * dp];
            cells.push((objective(x), x));
        }
    }
    let mut evals = cells.len();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));

    let (mut best, mut best_x) = cells[0];
    let nm = NelderMeadOptions {
        f_tol: opts.tol,
        ..NelderMeadOptions::default()
    };
    for &(_, x0) in cells.iter().take(opts.keep) {
        let opt = optimize::nelder_mead_max(objective, x0, [0.5 * dt, 0.5 * dp], nm);
        evals += opt.evals;
        if opt.value > best {
            best = opt.value;
            best_x = opt.x;
        }
    }

    let mut discord = mutual_information - best;
    if discord < 0.0 && discord >= -1e-9 {
        discord = 0.0;
    }
    DiscordResult {
        discord,
        classical_correlation: best,
        mutual_information,
        optimal_direction: MeasurementDirection::normalized(best_x[0], best_x[1]),
        optimizer_evals: evals,
    }
}
