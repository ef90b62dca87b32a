//! Ready-made measurement configurations for the tripartite GHZ/W studies:
//! the per-party Pauli assignments and the dimension-4 global settings,
//! wired to the matching bounds.

use crate::bounds::{bound_composite, BoundScenario};
use crate::criteria::CriterionError;
use crate::entropy::EntropyKind;
use crate::measurements::{mub_dim4, pauli_set, MeasurementSet, PauliAxis};
use crate::solvers::{CriterionConfig, SolverError};
use crate::states::StateFamily;

use PauliAxis::{X, Y, Z};

/// Which steering split to test and, for A→BC, which composite bound.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TriScenario {
    /// Alice steering Bob and Charlie; `separable_bound` selects the
    /// separable-state composite bound instead of the all-state one.
    AToBc {
        separable_bound: bool,
    },
    AbToCLocal,
    AbToCGlobal,
}

/// Per-party Pauli axes of the printed optimal settings, indexed
/// (setting, party).
pub fn tripartite_axes(
    family: &StateFamily,
    scenario: TriScenario,
    m: usize,
) -> Vec<[PauliAxis; 3]> {
    let ghz = matches!(family, StateFamily::NoisyGhz);
    match (ghz, scenario, m) {
        (true, _, 2) => vec![[X, X, X], [Z, Z, Z]],
        (true, _, 3) => vec![[X, X, X], [X, Y, Y], [Z, Z, Z]],
        (false, TriScenario::AToBc { .. }, 2) => vec![[X, X, X], [Z, Z, Z]],
        (false, TriScenario::AToBc { .. }, 3) => vec![[X, X, X], [Y, Y, Y], [Z, Z, Z]],
        (false, _, 2) => vec![[X, Z, X], [Z, Z, Z]],
        (false, _, 3) => vec![[X, Z, X], [Y, Z, Y], [Z, Z, Z]],
        _ => panic!("settings are tabulated for m in {{2,3}}"),
    }
}

/// Global AB measurements (dimension-4 MUBs) with Charlie's Pauli partners.
pub fn global_settings(
    family: &StateFamily,
    m: usize,
) -> Result<(MeasurementSet, MeasurementSet), CriterionError> {
    let mubs = mub_dim4();
    let ghz = matches!(family, StateFamily::NoisyGhz);
    let (ab_indices, c_axes): (Vec<usize>, Vec<PauliAxis>) = match m {
        2 => (vec![0, 1], vec![Z, X]),
        3 if ghz => (vec![0, 1, 2], vec![Z, X, Y]),
        3 => (vec![0, 1, 3], vec![Z, X, Y]),
        _ => {
            return Err(CriterionError::OutOfRange(format!(
                "global settings tabulated for m in {{2,3}}, got {m}"
            )))
        }
    };
    let ab = MeasurementSet::new(
        ab_indices
            .into_iter()
            .map(|i| mubs.bases()[i].clone())
            .collect(),
    )
    .map_err(|e| CriterionError::DimensionMismatch(e.to_string()))?;
    let c = pauli_set(&c_axes).map_err(|e| CriterionError::DimensionMismatch(e.to_string()))?;
    Ok((ab, c))
}

/// Criterion configuration for one row of the tripartite study: the printed
/// measurement settings of the (family, scenario, m) combination with the
/// matching entropic bound.
pub fn tripartite_config(
    family: &StateFamily,
    scenario: TriScenario,
    m: usize,
    kind: EntropyKind,
) -> Result<CriterionConfig, SolverError> {
    if !matches!(family, StateFamily::NoisyGhz | StateFamily::NoisyW) {
        return Err(SolverError::Criterion(CriterionError::OutOfRange(
            "tripartite settings are tabulated for the noisy GHZ and W families".into(),
        )));
    }
    if m != 2 && m != 3 {
        return Err(SolverError::Criterion(CriterionError::OutOfRange(format!(
            "settings are tabulated for m in {{2,3}}, got {m}"
        ))));
    }
    match scenario {
        TriScenario::AToBc { separable_bound } => {
            let axes = tripartite_axes(family, scenario, m);
            let sets = party_sets(&axes)?;
            let bound_scenario = if separable_bound {
                BoundScenario::CompositeSeparable
            } else {
                BoundScenario::CompositeAny
            };
            let bound =
                bound_composite(2, 2, m, kind, bound_scenario).map_err(CriterionError::Bound)?;
            CriterionConfig::a_to_bc(kind, sets, bound)
        }
        TriScenario::AbToCLocal => {
            let axes = tripartite_axes(family, scenario, m);
            CriterionConfig::ab_to_c_local(kind, party_sets(&axes)?)
        }
        TriScenario::AbToCGlobal => {
            let (ab, c) = global_settings(family, m)?;
            CriterionConfig::ab_to_c_global(kind, ab, c)
        }
    }
}

fn party_sets(axes: &[[PauliAxis; 3]]) -> Result<[MeasurementSet; 3], SolverError> {
    let per_party = |p: usize| -> Result<MeasurementSet, SolverError> {
        let list: Vec<PauliAxis> = axes.iter().map(|row| row[p]).collect();
        pauli_set(&list)
            .map_err(|e| SolverError::Criterion(CriterionError::DimensionMismatch(e.to_string())))
    };
    Ok([per_party(0)?, per_party(1)?, per_party(2)?])
}
