//! Property-based invariants of the measures and battery metrics.

use dipolar_qb::battery::{self, ergotropy, ergotropy_double_sum, unitary_capacity};
use dipolar_qb::dynamics::{self, ChargeOrdering};
use dipolar_qb::linalg::{self, matrix_exp, ComplexMatrix, C64};
use dipolar_qb::model::{self, ModelParams};
use dipolar_qb::resources::{concurrence, l1_coherence, quantum_discord};
use dipolar_qb::{thermal, DensityMatrix};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_complex(rng: &mut StdRng, n: usize) -> ComplexMatrix {
    let entries = (0..n * n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_rows(n, entries).unwrap()
}

fn random_state(rng: &mut StdRng) -> DensityMatrix {
    let a = random_complex(rng, 4);
    let rho = &a * &a.adjoint();
    let tr = rho.trace().re;
    DensityMatrix::new(rho.scale_real(1.0 / tr).hermitized()).unwrap()
}

fn random_hermitian(rng: &mut StdRng, n: usize) -> ComplexMatrix {
    let a = random_complex(rng, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

fn random_unitary(rng: &mut StdRng, n: usize) -> ComplexMatrix {
    matrix_exp(&random_hermitian(rng, n).scale(C64::new(0.0, 3.0)))
}

fn local_unitary(rng: &mut StdRng) -> ComplexMatrix {
    random_unitary(rng, 2).kron(&random_unitary(rng, 2))
}

#[test]
fn double_sum_ergotropy_matches_trace_form() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..1000 {
        let rho = random_state(&mut rng);
        let h = random_hermitian(&mut rng, 4).scale_real(5.0);
        let a = ergotropy(&rho, &h).unwrap();
        let b = ergotropy_double_sum(&rho, &h).unwrap();
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        assert!(a >= -1e-12);
        assert!(unitary_capacity(&rho, &h).unwrap() >= a - 1e-12);
    }
}

#[test]
fn measures_are_local_unitary_invariant() {
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..20 {
        let rho = random_state(&mut rng);
        let u = local_unitary(&mut rng);
        let rotated = DensityMatrix::new(rho.matrix().conjugate_by(&u).hermitized()).unwrap();
        assert!((concurrence(&rho) - concurrence(&rotated)).abs() <= 1e-6);
        let (a, b) = (quantum_discord(&rho), quantum_discord(&rotated));
        assert!((a.discord - b.discord).abs() <= 1e-4, "{} vs {}", a.discord, b.discord);
        assert!(a.discord >= -1e-9);
        assert!((a.discord - (a.mutual_information - a.classical_correlation)).abs() <= 1e-9);
    }
}

#[test]
fn entropy_is_unitarily_invariant() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..200 {
        let rho = random_state(&mut rng);
        let u = random_unitary(&mut rng, 4);
        let s0 = linalg::von_neumann_entropy(rho.matrix()).unwrap();
        let s1 = linalg::von_neumann_entropy(&rho.matrix().conjugate_by(&u).hermitized()).unwrap();
        assert!((s0 - s1).abs() <= 1e-10);
        assert!((0.0..=2.0 + 1e-12).contains(&s0));
    }
}

fn params() -> impl Strategy<Value = ModelParams> {
    (
        -5.0..5.0f64,
        -5.0..5.0f64,
        -5.0..5.0f64,
        -5.0..5.0f64,
        -5.0..5.0f64,
        0.1..10.0f64,
        0.2..3.0f64,
    )
        .prop_map(|(delta, epsilon, dm, ksea, field, temperature, omega)| ModelParams {
            delta,
            epsilon,
            dm,
            ksea,
            field,
            temperature,
            omega,
            gamma: 0.0,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measures_stay_in_range(seed in any::<u64>()) {
        let rho = random_state(&mut StdRng::seed_from_u64(seed));
        let c = concurrence(&rho);
        prop_assert!((0.0..=1.0).contains(&c));
        let l1 = l1_coherence(&rho);
        prop_assert!((0.0..=3.0 + 1e-12).contains(&l1));
    }

    #[test]
    fn gibbs_purity_decreases_with_temperature(p in params(), factor in 1.05..4.0f64) {
        let cold = thermal::gibbs_numeric(&p).unwrap().purity();
        let hot = thermal::gibbs_numeric(&ModelParams { temperature: p.temperature * factor, ..p }).unwrap().purity();
        prop_assert!(hot <= cold + 1e-12);
        prop_assert!(hot >= 0.25 - 1e-12);
    }

    #[test]
    fn charged_gibbs_ergotropy_is_bounded(p in params(), omega_t in 0.0..std::f64::consts::PI) {
        let h = model::build_hamiltonian(&p);
        let zeta = thermal::gibbs_numeric(&p).unwrap();
        let cap = unitary_capacity(&zeta, &h).unwrap();
        let rho = DensityMatrix::new(
            dynamics::charged_state(&p, zeta.matrix(), omega_t / p.omega, ChargeOrdering::Forward).hermitized(),
        ).unwrap();
        let xi = ergotropy(&rho, &h).unwrap();
        let work = battery::charged_gibbs_ergotropy(&p, omega_t, ChargeOrdering::Forward).unwrap();
        prop_assert!(xi >= -1e-9);
        prop_assert!(xi <= cap + 1e-9);
        prop_assert!((xi - work).abs() <= 1e-9);
    }

    #[test]
    fn orderings_agree(p in params(), omega_t in 0.0..std::f64::consts::PI) {
        let a = battery::charged_gibbs_ergotropy(&p, omega_t, ChargeOrdering::Forward).unwrap();
        let b = battery::charged_gibbs_ergotropy(&p, omega_t, ChargeOrdering::Adjoint).unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn closed_form_spectrum_is_exact(p in params()) {
        let cf = model::closed_form_spectrum(&p);
        prop_assert!(cf.max_residual(&model::build_hamiltonian(&p)) <= 1e-10);
    }
}
