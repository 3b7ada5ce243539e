//! Battery Hamiltonian, its closed-form spectrum, and the charging drive.
//!
//! ```text
//! H = D(σˣσʸ − σʸσˣ) + G(σˣσʸ + σʸσˣ)
//!     − ⅓[(Δ − 3ε)σˣσˣ + (Δ + 3ε)σʸσʸ − 2Δ σᶻσᶻ] + B(σᶻ𝟙 + 𝟙σᶻ)
//! H_ch = Ω(σˣ𝟙 + 𝟙σˣ)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, pauli, ComplexMatrix, C64, I, ONE, ZERO};

/// Physical parameters of the two-spin battery and its drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Axial anisotropy Δ.
    pub delta: f64,
    /// Rhombic anisotropy ε.
    pub epsilon: f64,
    /// DM strength D.
    pub dm: f64,
    /// KSEA strength G.
    pub ksea: f64,
    /// Zeeman field B along z.
    pub field: f64,
    /// Temperature T (k_B = 1), strictly positive.
    pub temperature: f64,
    /// Charging field Ω along x.
    pub omega: f64,
    /// Rate γ of the σˣ collapse operators.
    pub gamma: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            delta: 0.0,
            epsilon: 0.0,
            dm: 0.0,
            ksea: 0.0,
            field: 0.0,
            temperature: 1.0,
            omega: 1.0,
            gamma: 0.0,
        }
    }
}

/// Names of the sweepable parameters, in config/CLI spelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamName {
    Delta,
    Epsilon,
    Dm,
    Ksea,
    Field,
    Temperature,
    Gamma,
    Omega,
}

impl ParamName {
    pub const ALL: [ParamName; 8] = [
        ParamName::Delta,
        ParamName::Epsilon,
        ParamName::Dm,
        ParamName::Ksea,
        ParamName::Field,
        ParamName::Temperature,
        ParamName::Gamma,
        ParamName::Omega,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::Delta => "delta",
            ParamName::Epsilon => "epsilon",
            ParamName::Dm => "dm",
            ParamName::Ksea => "ksea",
            ParamName::Field => "field",
            ParamName::Temperature => "temperature",
            ParamName::Gamma => "gamma",
            ParamName::Omega => "omega",
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown parameter name '{s}'")))
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        for name in ParamName::ALL {
            let value = self.get(name);
            if !value.is_finite() {
                return Err(Error::Parameter {
                    name: name.as_str(),
                    value,
                    reason: "must be finite",
                });
            }
        }
        if self.temperature <= 0.0 {
            return Err(Error::Parameter {
                name: "temperature",
                value: self.temperature,
                reason: "must be > 0",
            });
        }
        if self.gamma < 0.0 {
            return Err(Error::Parameter {
                name: "gamma",
                value: self.gamma,
                reason: "must be >= 0",
            });
        }
        Ok(())
    }

    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::Delta => self.delta,
            ParamName::Epsilon => self.epsilon,
            ParamName::Dm => self.dm,
            ParamName::Ksea => self.ksea,
            ParamName::Field => self.field,
            ParamName::Temperature => self.temperature,
            ParamName::Gamma => self.gamma,
            ParamName::Omega => self.omega,
        }
    }

    pub fn set(&mut self, name: ParamName, value: f64) {
        match name {
            ParamName::Delta => self.delta = value,
            ParamName::Epsilon => self.epsilon = value,
            ParamName::Dm => self.dm = value,
            ParamName::Ksea => self.ksea = value,
            ParamName::Field => self.field = value,
            ParamName::Temperature => self.temperature = value,
            ParamName::Gamma => self.gamma = value,
            ParamName::Omega => self.omega = value,
        }
    }

    pub fn with(mut self, name: ParamName, value: f64) -> Self {
        self.set(name, value);
        self
    }

    /// κ₁ = √(9D² + Δ²).
    pub fn kappa1(&self) -> f64 {
        (9.0 * self.dm * self.dm + self.delta * self.delta).sqrt()
    }

    /// κ₂ = √(B² + G² + ε²).
    pub fn kappa2(&self) -> f64 {
        (self.field * self.field + self.ksea * self.ksea + self.epsilon * self.epsilon).sqrt()
    }
}

fn two_site(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// The battery Hamiltonian as a 4×4 matrix.
pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let (x, y, z, id) = (pauli::x(), pauli::y(), pauli::z(), pauli::identity());
    let xy = two_site(&x, &y);
    let yx = two_site(&y, &x);
    let xx = two_site(&x, &x);
    let yy = two_site(&y, &y);
    let zz = two_site(&z, &z);
    let zeeman = &two_site(&z, &id) + &two_site(&id, &z);

    // Dipolar tensor P = diag(Δ − 3ε, Δ + 3ε, −2Δ).
    let (pxx, pyy, pzz) = (
        p.delta - 3.0 * p.epsilon,
        p.delta + 3.0 * p.epsilon,
        -2.0 * p.delta,
    );
    let dipolar = &(&xx.scale_real(pxx) + &yy.scale_real(pyy)) + &zz.scale_real(pzz);

    let dm = (&xy - &yx).scale_real(p.dm);
    let ksea = (&xy + &yx).scale_real(p.ksea);
    let h = &(&dm + &ksea) - &dipolar.scale_real(1.0 / 3.0);
    &h + &zeeman.scale_real(p.field)
}

/// Form of the `|01⟩/|10⟩` eigenvector amplitude.
///
/// `Naive` copies the DM coefficient of `⟨01|H|10⟩ = 2iD − 2Δ/3` into
/// `η = (2iD − Δ)/κ₁`; that amplitude does not have unit modulus for
/// `D ≠ 0`, so the resulting vectors are neither eigenvectors nor mutually
/// orthogonal. `Corrected` uses `η = (3iD − Δ)/κ₁`, the actual
/// diagonalization of the 2×2 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaForm {
    Corrected,
    Naive,
}

/// Closed-form eigenpairs of the battery Hamiltonian.
#[derive(Debug, Clone)]
pub struct ClosedFormSpectrum {
    pub nu: [f64; 4],
    pub kappa1: f64,
    pub kappa2: f64,
    pub eigvecs: [[C64; 4]; 4],
}

impl ClosedFormSpectrum {
    /// `max_s ‖H|ψ_s⟩ − ν_s|ψ_s⟩‖`.
    pub fn max_residual(&self, h: &ComplexMatrix) -> f64 {
        self.nu
            .iter()
            .zip(&self.eigvecs)
            .map(|(&nu, v)| {
                let hv = h.apply(v);
                hv.iter()
                    .zip(v)
                    .map(|(a, b)| (a - b * nu).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |⟨ψ_i|ψ_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((linalg::inner(&self.eigvecs[i], &self.eigvecs[j]) - target).norm());
            }
        }
        worst
    }

    /// Eigenvalues sorted ascending.
    pub fn sorted_values(&self) -> [f64; 4] {
        let mut v = self.nu;
        v.sort_by(f64::total_cmp);
        v
    }
}

fn normalized(v: [C64; 4]) -> [C64; 4] {
    let n = linalg::vector_norm(&v);
    v.map(|z| z / n)
}

pub fn closed_form_spectrum(p: &ModelParams) -> ClosedFormSpectrum {
    closed_form_spectrum_with(p, EtaForm::Corrected)
}

/// Eigenvalues `ν₁…ν₄` with eigenvectors
/// `|ψ₁,₂⟩ ∝ ∓η|01⟩ + |10⟩`, `|ψ₃⟩ ∝ δ₁|00⟩ + |11⟩`, `|ψ₄⟩ ∝ δ₂|00⟩ + |11⟩`.
pub fn closed_form_spectrum_with(p: &ModelParams, form: EtaForm) -> ClosedFormSpectrum {
    let kappa1 = p.kappa1();
    let kappa2 = p.kappa2();
    let d = p.delta;
    let nu = [
        -2.0 * (d + kappa1) / 3.0,
        2.0 * (-d + kappa1) / 3.0,
        2.0 * (d - 3.0 * kappa2) / 3.0,
        2.0 * (d + 3.0 * kappa2) / 3.0,
    ];

    // |01⟩/|10⟩ block.
    let (psi1, psi2) = if kappa1 > 0.0 {
        let dm_coeff = match form {
            EtaForm::Corrected => 3.0,
            EtaForm::Naive => 2.0,
        };
        let eta = C64::new(-d, dm_coeff * p.dm) / kappa1;
        (
            normalized([ZERO, -eta, ONE, ZERO]),
            normalized([ZERO, eta, ONE, ZERO]),
        )
    } else {
        (
            normalized([ZERO, -ONE, ONE, ZERO]),
            normalized([ZERO, ONE, ONE, ZERO]),
        )
    };

    // |00⟩/|11⟩ block. δ₁ = i(κ₂ − B)/(G − iε), δ₂ = −i(κ₂ + B)/(G − iε);
    // κ₂ ∓ B are rewritten as (G² + ε²)/(κ₂ ± B) where the direct form cancels.
    let b = p.field;
    let off = C64::new(p.ksea, -p.epsilon);
    let off2 = off.norm_sqr();
    let (psi3, psi4) = if off2 > 0.0 {
        let minus = if b > 0.0 { off2 / (kappa2 + b) } else { kappa2 - b };
        let plus = if b < 0.0 { off2 / (kappa2 - b) } else { kappa2 + b };
        let delta1 = I * minus / off;
        let delta2 = -I * plus / off;
        (
            normalized([delta1, ZERO, ZERO, ONE]),
            normalized([delta2, ZERO, ZERO, ONE]),
        )
    } else if b >= 0.0 {
        ([ZERO, ZERO, ZERO, ONE], [ONE, ZERO, ZERO, ZERO])
    } else {
        ([ONE, ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO, ONE])
    };

    ClosedFormSpectrum {
        nu,
        kappa1,
        kappa2,
        eigvecs: [psi1, psi2, psi3, psi4],
    }
}

/// `Ω(σˣ⊗𝟙 + 𝟙⊗σˣ)`.
pub fn charging_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let (x, id) = (pauli::x(), pauli::identity());
    (&x.kron(&id) + &id.kron(&x)).scale_real(p.omega)
}

/// `exp(−i H_ch t)` in closed form: `cos²(Ωt)` on the diagonal,
/// `−sin²(Ωt)` on the anti-diagonal, `−(i/2)sin(2Ωt)` elsewhere.
pub fn charging_unitary(p: &ModelParams, t: f64) -> ComplexMatrix {
    let wt = p.omega * t;
    let a = C64::new(wt.cos().powi(2), 0.0);
    let b = C64::new(-wt.sin().powi(2), 0.0);
    let c = C64::new(0.0, -0.5 * (2.0 * wt).sin());
    ComplexMatrix::from_rows(
        4,
        vec![
            a, c, c, b, //
            c, a, b, c, //
            c, b, a, c, //
            b, c, c, a,
        ],
    )
    .expect("4x4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigen, matrix_exp, SortOrder};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn params(delta: f64, epsilon: f64, dm: f64, ksea: f64, field: f64) -> ModelParams {
        ModelParams {
            delta,
            epsilon,
            dm,
            ksea,
            field,
            ..ModelParams::default()
        }
    }

    #[test]
    fn zero_params_give_zero_hamiltonian() {
        let h = build_hamiltonian(&params(0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn axial_only_entries() {
        let h = build_hamiltonian(&params(1.0, 0.0, 0.0, 0.0, 0.0));
        let expect = |i, j, v: f64| assert_abs_diff_eq!(h[(i, j)].re, v, epsilon = 1e-15);
        expect(0, 0, 2.0 / 3.0);
        expect(3, 3, 2.0 / 3.0);
        expect(1, 1, -2.0 / 3.0);
        expect(2, 2, -2.0 / 3.0);
        expect(1, 2, -2.0 / 3.0);
        expect(2, 1, -2.0 / 3.0);
        assert_abs_diff_eq!(h[(0, 3)].norm(), 0.0);
    }

    #[test]
    fn zeeman_only_is_diagonal() {
        let h = build_hamiltonian(&params(0.0, 0.0, 0.0, 0.0, 1.0));
        let expected = ComplexMatrix::from_diag(&[2.0, 0.0, 0.0, -2.0]).unwrap();
        assert_eq!(h.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn axial_only_spectrum() {
        let p = params(1.0, 0.0, 0.0, 0.0, 0.0);
        let e = hermitian_eigen(&build_hamiltonian(&p), SortOrder::Ascending).unwrap();
        let expected = [-4.0 / 3.0, 0.0, 2.0 / 3.0, 2.0 / 3.0];
        for (a, b) in e.values.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let cf = closed_form_spectrum(&p);
        for (a, b) in cf.sorted_values().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_params_spectrum() {
        let cf = closed_form_spectrum(&ModelParams::default());
        assert_eq!(cf.nu, [0.0; 4]);
        assert!(cf.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn degenerate_branches_are_eigenvectors() {
        for p in [
            params(0.0, 0.3, 0.0, 0.2, 0.5),  // κ₁ = 0
            params(1.0, 0.0, 0.4, 0.0, 0.5),  // G = ε = 0, B > 0
            params(1.0, 0.0, 0.4, 0.0, -0.5), // G = ε = 0, B < 0
            params(1.0, 0.0, 0.0, 0.0, 0.0),  // κ₂ = 0
            params(1.0, 1e-9, 0.0, 0.0, -3.0), // near-singular δ
        ] {
            let cf = closed_form_spectrum(&p);
            let h = build_hamiltonian(&p);
            assert!(cf.max_residual(&h) < 1e-10, "{p:?}");
            assert!(cf.orthonormality_defect() < 1e-10, "{p:?}");
        }
    }

    #[test]
    fn naive_eta_is_not_an_eigenvector_with_dm() {
        let p = params(1.0, 0.5, 0.7, 0.2, 0.1);
        let h = build_hamiltonian(&p);
        let naive = closed_form_spectrum_with(&p, EtaForm::Naive);
        assert!(naive.max_residual(&h) > 1e-3);
        let fixed = closed_form_spectrum(&p);
        assert!(fixed.max_residual(&h) < 1e-12);
        // Without DM both forms coincide.
        let p = params(1.0, 0.5, 0.0, 0.2, 0.1);
        let naive = closed_form_spectrum_with(&p, EtaForm::Naive);
        assert!(naive.max_residual(&build_hamiltonian(&p)) < 1e-12);
    }

    #[test]
    fn charging_hamiltonian_examples() {
        let zero = charging_hamiltonian(&ModelParams {
            omega: 0.0,
            ..ModelParams::default()
        });
        assert_eq!(zero.max_abs(), 0.0);
        let h = charging_hamiltonian(&ModelParams::default());
        let e = hermitian_eigen(&h, SortOrder::Ascending).unwrap();
        for (a, b) in e.values.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let half = charging_hamiltonian(&ModelParams {
            omega: 0.5,
            ..ModelParams::default()
        });
        assert_abs_diff_eq!(half[(0, 1)].re, 0.5);
    }

    #[test]
    fn charging_unitary_examples() {
        let p = ModelParams::default();
        assert!(charging_unitary(&p, 0.0).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);

        let u = charging_unitary(&p, PI / 4.0);
        assert_abs_diff_eq!(u[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(0, 3)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(0, 1)].im, -0.5, epsilon = 1e-15);

        let u = charging_unitary(&p, PI / 2.0);
        assert_abs_diff_eq!(u[(0, 0)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(0, 3)].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(0, 1)].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn charging_unitary_matches_exponential() {
        let p = ModelParams {
            omega: 0.7,
            ..ModelParams::default()
        };
        let hch = charging_hamiltonian(&p);
        for k in 0..=200 {
            let t = 2.0 * PI * k as f64 / 200.0 / p.omega;
            let u = charging_unitary(&p, t);
            let uu = &u * &u.adjoint();
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-12);
            let reference = matrix_exp(&hch.scale(C64::new(0.0, -t)));
            assert!(u.max_abs_diff(&reference) <= 1e-10, "t = {t}");
        }
    }

    #[test]
    fn param_names_round_trip() {
        for name in ParamName::ALL {
            assert_eq!(name.as_str().parse::<ParamName>().unwrap(), name);
        }
        assert!("beta".parse::<ParamName>().is_err());
    }

    #[test]
    fn validation() {
        assert!(ModelParams::default().validate().is_ok());
        let bad = ModelParams {
            temperature: 0.0,
            ..ModelParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = ModelParams {
            gamma: -0.1,
            ..ModelParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = ModelParams {
            delta: f64::NAN,
            ..ModelParams::default()
        };
        assert!(bad.validate().is_err());
    }
}
