//! Numerical core for a two-qubit magnetic dipolar quantum battery with
//! Dzyaloshinsky–Moriya (DM), Kaplan–Shekhtman–Entin-Wohlman–Aharony (KSEA)
//! and Zeeman couplings.
//!
//! The crate covers the whole pipeline: building the Hamiltonian and its
//! closed-form spectrum, Gibbs thermal states, Lindblad evolution under
//! σˣ collapse operators, unitary charging, quantum-resource measures
//! (l1 coherence, concurrence, discord) and battery metrics (ergotropy,
//! power, efficiency, capacity).
//!
//! All operators act on the computational basis `|00⟩, |01⟩, |10⟩, |11⟩`
//! with `σᶻ|0⟩ = +|0⟩`, and energies are dimensionless with `k_B = 1`.

pub mod battery;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod optimize;
pub mod resources;
pub mod state;
pub mod thermal;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SortOrder, SpectralDecomposition, C64};
pub use model::{ModelParams, ParamName};
pub use state::DensityMatrix;
