//! Detection of quantum steering in bipartite and tripartite states through
//! entropic uncertainty relations.
//!
//! The crate evaluates conditional-entropy steering criteria built from
//! Shannon, Tsallis and Rényi entropies against state-independent
//! uncertainty bounds for mutually unbiased measurements. On top of the
//! criteria it provides noise-threshold bisection, entropy-parameter sweeps,
//! measurement optimization over local unitaries, and a Monte-Carlo survey
//! comparing two-qubit criteria over random states.
//!
//! Module layout:
//! - [`linalg`]: dense complex matrices, Hermitian eigenvalues, seeded
//!   random unitaries and random density matrices.
//! - [`entropy`]: entropies, q-logarithm, divergences over distributions.
//! - [`measurements`]: Pauli bases, MUB constructions, rotations.
//! - [`states`]: all state families under test.
//! - [`bounds`]: the uncertainty-bound catalog and its numerical certifier.
//! - [`criteria`]: assemblage probabilities and every steering criterion.
//! - [`solvers`]: bisection, sweeps, optimization, and the random survey.
//!
//! # Example
//!
//! The q=2 Tsallis criterion detects the Werner family above 1/√3:
//!
//! ```
//! use entrosteer::entropy::EntropyKind;
//! use entrosteer::measurements::pauli_triple;
//! use entrosteer::solvers::{threshold_bisect, CriterionConfig};
//! use entrosteer::states::StateFamily;
//!
//! let config = CriterionConfig::bipartite(
//!     EntropyKind::Tsallis { q: 2.0 },
//!     pauli_triple(),
//!     pauli_triple(),
//! )
//! .unwrap();
//! let result = threshold_bisect(&StateFamily::Werner, &config, 1e-4).unwrap();
//! assert!((result.critical - 1.0 / 3.0_f64.sqrt()).abs() < 1e-3);
//! ```

pub mod bounds;
pub mod criteria;
pub mod entropy;
pub mod linalg;
pub mod measurements;
pub(crate) mod optim;
pub mod presets;
pub mod solvers;
pub mod states;

pub use entropy::{EntropyKind, ProbDist};
pub use linalg::{ComplexMatrix, DensityMatrix, RngSeed};
pub use measurements::{MeasurementBasis, MeasurementSet};
