//! Gibbs thermal state `ζ = e^{−H/T}/Z`, numerically and in closed form.
//!
//! The numeric state is the one every downstream computation uses. The
//! closed-form entries and eigenvalues exist to cross-check it.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, SortOrder, SpectralDecomposition, C64, I, ZERO};
use crate::model::{self, ModelParams};
pub use crate::state::DensityMatrix;

const SERIES_CUTOFF: f64 = 1e-6;

fn check_temperature(p: &ModelParams) -> Result<()> {
    if !(p.temperature > 0.0) || !p.temperature.is_finite() {
        return Err(Error::Parameter {
            name: "temperature",
            value: p.temperature,
            reason: "must be > 0",
        });
    }
    Ok(())
}

/// Boltzmann weights `e^{−(ν − ν_min)/T}`, normalized.
pub fn boltzmann_weights(energies: &[f64], temperature: f64) -> Vec<f64> {
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies
        .iter()
        .map(|e| (-(e - min) / temperature).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// `e^{−H/T}/Tr[e^{−H/T}]` through the eigendecomposition of `H`.
pub fn gibbs_numeric(p: &ModelParams) -> Result<DensityMatrix> {
    check_temperature(p)?;
    let h = model::build_hamiltonian(p);
    let eig = linalg::hermitian_eigen(&h, SortOrder::Ascending)?;
    let weights = boltzmann_weights(&eig.values, p.temperature);
    let mut rho = ComplexMatrix::zeros(4);
    for (w, v) in weights.iter().zip(&eig.vectors) {
        rho = &rho + &ComplexMatrix::projector(v)?.scale_real(*w);
    }
    DensityMatrix::new(rho.hermitized())
}

/// Closed-form entries of the X-shaped Gibbs state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsClosedForm {
    pub z11: C64,
    pub z14: C64,
    pub z22: C64,
    pub z23: C64,
    pub z44: C64,
    /// `2κ₂/T`.
    pub j_arg: f64,
    /// `2κ₁/(3T)`.
    pub s_arg: f64,
}

impl GibbsClosedForm {
    /// The 4×4 state with `ζ₃₂ = ζ₂₃*`, `ζ₄₁ = ζ₁₄*` and `ζ₃₃ = ζ₂₂`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = self.z11;
        m[(0, 3)] = self.z14;
        m[(3, 0)] = self.z14.conj();
        m[(1, 1)] = self.z22;
        m[(2, 2)] = self.z22;
        m[(1, 2)] = self.z23;
        m[(2, 1)] = self.z23.conj();
        m[(3, 3)] = self.z44;
        m
    }
}

/// Hyperbolic functions pre-multiplied by a common `e^{−M}` so that low
/// temperatures do not overflow. Every closed-form expression is a ratio, so
/// the shift cancels.
struct ScaledHyperbolics {
    /// `e^{4Δ/3T}·cosh 𝒮`
    ecs: f64,
    /// `e^{4Δ/3T}·|sinh 𝒮|`
    ess: f64,
    /// `e^{4Δ/3T}·sinh(𝒮)/𝒮`
    esc: f64,
    cosh_j: f64,
    sinh_j: f64,
    /// `sinh(𝒥)/𝒥`
    sinhc_j: f64,
}

impl ScaledHyperbolics {
    fn new(a: f64, s: f64, j: f64) -> Self {
        // s, j ≥ 0
        let shift = (a + s).max(j);
        let e = |x: f64| (x - shift).exp();
        let sinhc = |x: f64, prefactor: f64| {
            if x < SERIES_CUTOFF {
                e(prefactor) * (1.0 + x * x / 6.0)
            } else {
                0.5 * (e(prefactor + x) - e(prefactor - x)) / x
            }
        };
        ScaledHyperbolics {
            ecs: 0.5 * (e(a + s) + e(a - s)),
            ess: 0.5 * (e(a + s) - e(a - s)),
            esc: sinhc(s, a),
            cosh_j: 0.5 * (e(j) + e(-j)),
            sinh_j: 0.5 * (e(j) - e(-j)),
            sinhc_j: sinhc(j, 0.0),
        }
    }

    /// `e^{4Δ/3T}cosh 𝒮 + cosh 𝒥`
    fn denominator(&self) -> f64 {
        self.ecs + self.cosh_j
    }
}

/// Gibbs-state entries from the closed-form expressions.
pub fn gibbs_closed_form(p: &ModelParams) -> Result<GibbsClosedForm> {
    check_temperature(p)?;
    let t = p.temperature;
    let j_arg = 2.0 * p.kappa2() / t;
    let s_arg = 2.0 * p.kappa1() / (3.0 * t);
    let a = 4.0 * p.delta / (3.0 * t);
    let h = ScaledHyperbolics::new(a, s_arg, j_arg);
    let den = h.denominator();

    // 2B sinh(𝒥)/(𝒥T)
    let zeeman = 2.0 * p.field * h.sinhc_j / t;
    let z11 = (h.cosh_j - zeeman) / (2.0 * den);
    let z44 = (h.cosh_j + zeeman) / (2.0 * den);
    let z14 = I * C64::new(p.ksea, p.epsilon) * h.sinhc_j / (t * den);
    let z22 = 0.5 + 1.0 / (-2.0 - 2.0 * h.ecs / h.cosh_j);
    let z23 = C64::new(p.delta, -3.0 * p.dm) * h.esc / (3.0 * t * den);

    Ok(GibbsClosedForm {
        z11: C64::new(z11, 0.0),
        z14,
        z22: C64::new(z22, 0.0),
        z23,
        z44: C64::new(z44, 0.0),
        j_arg,
        s_arg,
    })
}

/// Closed-form Gibbs eigenvalues `φ₁…φ₄`.
pub fn gibbs_closed_form_eigenvalues(p: &ModelParams) -> Result<[f64; 4]> {
    check_temperature(p)?;
    let t = p.temperature;
    let j_arg = 2.0 * p.kappa2() / t;
    let s_arg = 2.0 * p.kappa1() / (3.0 * t);
    let a = 4.0 * p.delta / (3.0 * t);
    let h = ScaledHyperbolics::new(a, s_arg, j_arg);
    let den = 2.0 * h.denominator();
    Ok([
        (h.ecs - h.ess) / den,
        (h.ecs + h.ess) / den,
        (h.cosh_j - h.sinh_j) / den,
        (h.cosh_j + h.sinh_j) / den,
    ])
}

/// The 𝓛-normalized closed-form Gibbs eigenvectors `|φ₁⟩…|φ₄⟩`, or `None` where
/// the expressions are singular (κ₁ = 0, κ₂ = 0 or G = ε = 0).
pub fn gibbs_closed_form_eigenvectors(p: &ModelParams) -> Result<Option<[[C64; 4]; 4]>> {
    check_temperature(p)?;
    let t = p.temperature;
    let kappa1 = p.kappa1();
    let kappa2 = p.kappa2();
    let off = C64::new(p.ksea, -p.epsilon);
    if kappa1 == 0.0 || kappa2 == 0.0 || off.norm() == 0.0 {
        return Ok(None);
    }
    let j_arg = 2.0 * kappa2 / t;
    let s_arg = 2.0 * kappa1 / (3.0 * t);
    let a = 4.0 * p.delta / (3.0 * t);
    let h = ScaledHyperbolics::new(a, s_arg, j_arg);

    let eta = C64::new(-p.delta, 2.0 * p.dm) / kappa1;
    // α = e^{4Δ/3T} η κ₁κ₂ sinh𝒮 / 𝒯 with 𝒯 = e^{4Δ/3T} κ₁κ₂ |sinh𝒮|
    let alpha = eta;
    // 𝓛 = 𝒯 csch(𝒥)/κ₁
    let ell = h.ess * kappa2 / h.sinh_j;
    let b = p.field;

    let norm = |v: [C64; 4]| {
        let n = linalg::vector_norm(&v);
        v.map(|z| z / n)
    };
    let one = C64::new(1.0, 0.0);
    Ok(Some([
        norm([ZERO, alpha, one, ZERO]),
        norm([ZERO, -alpha, one, ZERO]),
        norm([-I * (b + ell) / off, ZERO, ZERO, one]),
        norm([-I * (b - ell) / off, ZERO, ZERO, one]),
    ]))
}

/// Numeric Gibbs spectrum with closed-form diagnostics attached.
#[derive(Debug, Clone)]
pub struct GibbsSpectrum {
    /// Descending spectrum of the numeric Gibbs state.
    pub decomposition: SpectralDecomposition,
    /// Closed-form `φ₁…φ₄`, in closed-form order.
    pub closed_form_values: [f64; 4],
    /// Largest gap between the sorted closed-form and numeric eigenvalues.
    pub max_value_deviation: f64,
    /// Largest Rayleigh residual `‖ζv − (v†ζv)v‖` of the 𝓛-normalized closed-form
    /// eigenvectors; `None` where they are singular.
    pub eigenvector_residual: Option<f64>,
}

pub fn gibbs_spectrum(p: &ModelParams) -> Result<GibbsSpectrum> {
    let zeta = gibbs_numeric(p)?;
    let decomposition = zeta.spectrum(SortOrder::Descending);
    let closed_form_values = gibbs_closed_form_eigenvalues(p)?;
    let mut sorted = closed_form_values;
    sorted.sort_by(|a, b| b.total_cmp(a));
    let max_value_deviation = sorted
        .iter()
        .zip(&decomposition.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let eigenvector_residual = gibbs_closed_form_eigenvectors(p)?.map(|vectors| {
        vectors
            .iter()
            .map(|v| rayleigh_residual(zeta.matrix(), v))
            .fold(0.0, f64::max)
    });

    Ok(GibbsSpectrum {
        decomposition,
        closed_form_values,
        max_value_deviation,
        eigenvector_residual,
    })
}

fn rayleigh_residual(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let mv = m.apply(v);
    let q = linalg::inner(v, &mv);
    mv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * q).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(delta: f64, epsilon: f64, dm: f64, ksea: f64, field: f64, t: f64) -> ModelParams {
        ModelParams {
            delta,
            epsilon,
            dm,
            ksea,
            field,
            temperature: t,
            ..ModelParams::default()
        }
    }

    #[test]
    fn rejects_non_positive_temperature() {
        let p = params(1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(gibbs_numeric(&p), Err(Error::Parameter { .. })));
        assert!(matches!(gibbs_closed_form(&p), Err(Error::Parameter { .. })));
    }

    #[test]
    fn high_temperature_is_maximally_mixed() {
        let p = params(1.0, 0.5, 0.3, 0.2, 0.1, 1e6);
        let rho = gibbs_numeric(&p).unwrap();
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(rho.matrix().max_abs_diff(&mixed) <= 1e-5);
        let spec = gibbs_spectrum(&p).unwrap();
        for v in spec.decomposition.values {
            assert_abs_diff_eq!(v, 0.25, epsilon = 1e-5);
        }
    }

    #[test]
    fn diagonal_hamiltonian_boltzmann_weights() {
        let p = params(0.0, 0.0, 0.0, 0.0, 1.0, 1.0);
        let rho = gibbs_numeric(&p).unwrap();
        let w = [(-2f64).exp(), 1.0, 1.0, 2f64.exp()];
        let z: f64 = w.iter().sum();
        for (i, wi) in w.iter().enumerate() {
            assert_abs_diff_eq!(rho.matrix()[(i, i)].re, wi / z, epsilon = 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_numeric() {
        for p in [
            params(1.0, 0.5, 0.0, 0.0, 0.1, 0.5),
            params(1.0, 0.5, 0.3, 0.2, 0.1, 1.0),
            params(-2.0, 0.1, 1.5, -0.7, 0.4, 0.05),
        ] {
            let numeric = gibbs_numeric(&p).unwrap();
            let cf = gibbs_closed_form(&p).unwrap().to_matrix();
            assert!(numeric.matrix().max_abs_diff(&cf) <= 1e-10, "{p:?}");
        }
    }

    #[test]
    fn closed_form_zeroes() {
        let cf = gibbs_closed_form(&params(1.0, 0.0, 0.4, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(cf.z14.norm(), 0.0);
        let p = params(0.0, 0.5, 0.0, 0.2, 0.1, 0.7);
        let cf = gibbs_closed_form(&p).unwrap();
        assert_eq!(cf.z23.norm(), 0.0);
        let numeric = gibbs_numeric(&p).unwrap();
        assert!(numeric.matrix().max_abs_diff(&cf.to_matrix()) <= 1e-12);
    }

    #[test]
    fn closed_form_invariants() {
        let cf = gibbs_closed_form(&params(0.3, -0.2, 0.1, 0.9, -0.4, 0.3)).unwrap();
        assert_eq!(cf.z11.im, 0.0);
        assert_eq!(cf.z22.im, 0.0);
        assert_eq!(cf.z44.im, 0.0);
        assert_abs_diff_eq!((cf.z22 * 2.0 + cf.z11 + cf.z44).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_survives_low_temperature() {
        let p = params(5.0, 5.0, 5.0, 5.0, 5.0, 0.01);
        let cf = gibbs_closed_form(&p).unwrap();
        assert!(cf.to_matrix().entries().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        let numeric = gibbs_numeric(&p).unwrap();
        assert!(numeric.matrix().max_abs_diff(&cf.to_matrix()) <= 1e-10);
    }

    #[test]
    fn spectrum_matches_closed_form_values() {
        let p = params(1.0, 0.5, 0.0, 0.0, 0.1, 0.5);
        let spec = gibbs_spectrum(&p).unwrap();
        assert!(spec.max_value_deviation <= 1e-9);
        let total: f64 = spec.decomposition.values.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_is_boltzmann_of_hamiltonian() {
        let p = params(0.7, -0.3, 0.2, 0.5, 0.9, 0.8);
        let spec = gibbs_spectrum(&p).unwrap();
        let cf = model::closed_form_spectrum(&p);
        let mut expected = boltzmann_weights(&cf.nu, p.temperature);
        expected.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in spec.decomposition.values.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn closed_form_eigenvectors_are_reported() {
        // κ₂ sinh𝒮 e^{4Δ/3T}/sinh𝒥 ≠ κ₂ here, so the closed-form |φ₃⟩, |φ₄⟩ are off.
        let p = params(1.0, 0.5, 0.0, 0.3, 0.2, 1.0);
        let spec = gibbs_spectrum(&p).unwrap();
        assert!(spec.eigenvector_residual.unwrap() > 1e-3);
        let degenerate = gibbs_spectrum(&params(1.0, 0.0, 0.0, 0.0, 0.2, 1.0)).unwrap();
        assert!(degenerate.eigenvector_residual.is_none());
    }

    #[test]
    fn gibbs_commutes_with_hamiltonian() {
        let p = params(1.3, 0.4, -0.6, 0.8, 0.25, 0.6);
        let rho = gibbs_numeric(&p).unwrap();
        let h = model::build_hamiltonian(&p);
        assert!(rho.matrix().commutator(&h).max_abs() <= 1e-10);
    }
}
