//! Assemblage probabilities and the steering criteria: conditional-entropy
//! criteria for Shannon, Tsallis and Rényi entropies, the global-observable
//! and permutation-recombination entanglement criteria, the linear
//! correlation test, closed forms for isotropic and general two-qubit states,
//! the one-way detection window, and the tripartite A→BC / AB→C variants.
//!
//! Every check produces a [`CriterionReport`]; a criterion is violated (the
//! state is detected as steerable) when its left-hand side drops below the
//! entropic bound.

use crate::bounds::{bound_tsallis_mub, BoundError, BoundValue};
use crate::entropy::{
    entropy_raw, q_log, shannon_raw, tsallis_raw, EntropyError, EntropyKind, ProbDist,
    NORMALIZATION_TOL, PARAM_ONE_TOL,
};
use crate::linalg::{kron, ComplexMatrix, DensityMatrix};
use crate::measurements::{MeasurementSet, Observable};
use crate::states::BlochParams;
use serde::Serialize;
use thiserror::Error;

/// A criterion counts as violated when lhs < bound − VIOLATION_TOL.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid permutation matrix: {0}")]
    InvalidPermutationMatrix(String),
    #[error("marginal inconsistent with joint at index {index}: {row_sum} vs {marginal}")]
    MarginalMismatch {
        index: usize,
        row_sum: f64,
        marginal: f64,
    },
    #[error("singular marginal: |a_{index}| = {value} leaves no conditional information")]
    SingularMarginal { index: usize, value: f64 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Measurement layout of a steering test: party dimensions, how many leading
/// parties are untrusted, and one measurement set per party (equal setting
/// counts, combined index-wise: A_m with B_m with C_m).
#[derive(Clone, Debug)]
pub struct Scenario {
    party_dims: Vec<usize>,
    untrusted_parties: usize,
    sets: Vec<MeasurementSet>,
}

impl Scenario {
    pub fn new(
        untrusted_parties: usize,
        sets: Vec<MeasurementSet>,
    ) -> Result<Self, CriterionError> {
        if sets.is_empty() {
            return Err(CriterionError::DimensionMismatch(
                "no measurement sets".into(),
            ));
        }
        if untrusted_parties == 0 || untrusted_parties >= sets.len() {
            return Err(CriterionError::DimensionMismatch(format!(
                "untrusted party count {untrusted_parties} incompatible with {} parties",
                sets.len()
            )));
        }
        let m = sets[0].len();
        if sets.iter().any(|s| s.len() != m) {
            return Err(CriterionError::DimensionMismatch(
                "all parties need the same number of settings".into(),
            ));
        }
        let party_dims = sets.iter().map(|s| s.dim()).collect();
        Ok(Scenario {
            party_dims,
            untrusted_parties,
            sets,
        })
    }

    /// Untrusted Alice steering trusted Bob.
    pub fn bipartite(alice: MeasurementSet, bob: MeasurementSet) -> Result<Self, CriterionError> {
        Scenario::new(1, vec![alice, bob])
    }

    pub fn settings(&self) -> usize {
        self.sets[0].len()
    }

    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    pub fn untrusted_parties(&self) -> usize {
        self.untrusted_parties
    }

    pub fn sets(&self) -> &[MeasurementSet] {
        &self.sets
    }

    /// Same layout with every party's set rotated by its own unitary.
    pub fn rotated(&self, unitaries: &[ComplexMatrix]) -> Result<Self, CriterionError> {
        if unitaries.len() != self.sets.len() {
            return Err(CriterionError::DimensionMismatch(format!(
                "need one unitary per party ({}), got {}",
                self.sets.len(),
                unitaries.len()
            )));
        }
        let sets = self
            .sets
            .iter()
            .zip(unitaries)
            .map(|(s, u)| crate::measurements::rotate(s, std::slice::from_ref(u)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CriterionError::DimensionMismatch(e.to_string()))?;
        Scenario::new(self.untrusted_parties, sets)
    }

    pub fn total_dim(&self) -> usize {
        self.party_dims.iter().product()
    }
}

/// Joint outcome distribution of one setting together with the marginal of
/// the untrusted parties. Outcomes are laid out row-major by party order with
/// the untrusted parties leading.
#[derive(Clone, Debug)]
pub struct SettingDist {
    joint: ProbDist,
    outcome_counts: Vec<usize>,
    untrusted_parties: usize,
    marginal: ProbDist,
}

impl SettingDist {
    pub fn from_joint(
        probs: Vec<f64>,
        outcome_counts: Vec<usize>,
        untrusted_parties: usize,
    ) -> Result<Self, CriterionError> {
        let joint = ProbDist::new(probs)?;
        Self::assemble(joint, outcome_counts, untrusted_parties, None)
    }

    /// Build from an explicit joint/marginal pair, checking consistency.
    pub fn from_parts(
        joint: ProbDist,
        marginal: ProbDist,
        outcome_counts: Vec<usize>,
        untrusted_parties: usize,
    ) -> Result<Self, CriterionError> {
        Self::assemble(joint, outcome_counts, untrusted_parties, Some(marginal))
    }

    fn assemble(
        joint: ProbDist,
        outcome_counts: Vec<usize>,
        untrusted_parties: usize,
        marginal: Option<ProbDist>,
    ) -> Result<Self, CriterionError> {
        let total: usize = outcome_counts.iter().product();
        if total != joint.len() || outcome_counts.is_empty() {
            return Err(CriterionError::DimensionMismatch(format!(
                "outcome counts {outcome_counts:?} do not factor a joint of length {}",
                joint.len()
            )));
        }
        if untrusted_parties == 0 || untrusted_parties >= outcome_counts.len() {
            return Err(CriterionError::DimensionMismatch(format!(
                "untrusted party count {untrusted_parties} incompatible with {} parties",
                outcome_counts.len()
            )));
        }
        let rows: usize = outcome_counts[..untrusted_parties].iter().product();
        let cols = total / rows;
        let sums: Vec<f64> = (0..rows)
            .map(|u| joint.probs()[u * cols..(u + 1) * cols].iter().sum())
            .collect();
        let marginal = match marginal {
            Some(m) => {
                if m.len() != rows {
                    return Err(CriterionError::DimensionMismatch(format!(
                        "marginal length {} vs untrusted outcome count {rows}",
                        m.len()
                    )));
                }
                for (u, (&row_sum, &given)) in sums.iter().zip(m.probs()).enumerate() {
                    if (row_sum - given).abs() > NORMALIZATION_TOL {
                        return Err(CriterionError::MarginalMismatch {
                            index: u,
                            row_sum,
                            marginal: given,
                        });
                    }
                }
                m
            }
            None => ProbDist::new(sums)?,
        };
        Ok(SettingDist {
            joint,
            outcome_counts,
            untrusted_parties,
            marginal,
        })
    }

    pub fn joint(&self) -> &ProbDist {
        &self.joint
    }

    pub fn marginal(&self) -> &ProbDist {
        &self.marginal
    }

    pub fn outcome_counts(&self) -> &[usize] {
        &self.outcome_counts
    }

    pub fn parties(&self) -> usize {
        self.outcome_counts.len()
    }

    pub fn untrusted_parties(&self) -> usize {
        self.untrusted_parties
    }

    /// (untrusted outcomes, trusted outcomes, flattened joint).
    pub fn grid(&self) -> (usize, usize, &[f64]) {
        let rows = self.marginal.len();
        let cols = self.joint.len() / rows;
        (rows, cols, self.joint.probs())
    }
}

/// Per-setting outcome distributions of one steering experiment.
#[derive(Clone, Debug)]
pub struct SettingDistributions {
    pub settings: Vec<SettingDist>,
}

/// Outcome probabilities p(i,j,…) = ⟨v_i ⊗ v_j ⊗ …| ρ |v_i ⊗ v_j ⊗ …⟩ for
/// every setting of the scenario. Small negative round-off is clamped to
/// zero and the distribution renormalized.
pub fn assemblage(
    rho: &DensityMatrix,
    scenario: &Scenario,
) -> Result<SettingDistributions, CriterionError> {
    if scenario.total_dim() != rho.dim() {
        return Err(CriterionError::DimensionMismatch(format!(
            "party dims {:?} do not factor state dimension {}",
            scenario.party_dims(),
            rho.dim()
        )));
    }
    let mut settings = Vec::with_capacity(scenario.settings());
    for m in 0..scenario.settings() {
        let mut w = scenario.sets()[0].bases()[m].matrix().clone();
        for set in &scenario.sets()[1..] {
            w = kron(&w, set.bases()[m].matrix());
        }
        let dim = rho.dim();
        let mut probs = Vec::with_capacity(dim);
        for k in 0..dim {
            let col = w.column(k);
            let rho_col = rho.matrix().matvec(&col);
            let p = crate::linalg::vec_inner(&col, &rho_col).re;
            // round-off from states at the positivity floor can push an
            // outcome slightly negative; anything worse is a real error
            if p < crate::linalg::EIGENVALUE_FLOOR {
                return Err(CriterionError::OutOfRange(format!(
                    "outcome probability {p:.3e} in setting {m}"
                )));
            }
            probs.push(p.max(0.0));
        }
        settings.push(SettingDist::from_joint(
            probs,
            scenario.party_dims().to_vec(),
            scenario.untrusted_parties(),
        )?);
    }
    Ok(SettingDistributions { settings })
}

/// Which inequality produced a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "criterion", rename_all = "kebab-case")]
pub enum CriterionTag {
    ShannonConditional,
    TsallisConditional { q: f64 },
    RenyiDivergence { r: f64 },
    GlobalObservable { kind: EntropyKind },
    PermutationRecombination { kind: EntropyKind },
    LinearCorrelation,
    IsotropicClosedForm { q: f64 },
    TwoQubitClosedFormQ2,
    TripartiteOneToTwo { q: f64 },
    TripartiteTwoToOne { q: f64 },
    OneWayWindow,
}

/// Universal result of a steering check: the summed left-hand side, the
/// entropic bound it is compared against, and the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    #[serde(flatten)]
    pub criterion: CriterionTag,
    pub lhs: f64,
    pub bound: BoundValue,
    pub violated: bool,
    pub per_setting: Vec<f64>,
    pub tolerance: f64,
}

impl CriterionReport {
    fn from_terms(criterion: CriterionTag, per_setting: Vec<f64>, bound: BoundValue) -> Self {
        let lhs: f64 = per_setting.iter().sum();
        let violated = lhs < bound.value - VIOLATION_TOL;
        CriterionReport {
            criterion,
            lhs,
            bound,
            violated,
            per_setting,
            tolerance: VIOLATION_TOL,
        }
    }

    /// lhs − bound; negative margin means violation (steering detected).
    pub fn margin(&self) -> f64 {
        self.lhs - self.bound.value
    }
}

/// Σ_u p_u Σ_t (p_{ut}/p_u)^e over the untrusted/trusted split. Terms with
/// p_u = 0 contribute nothing: a zero-probability outcome carries no
/// conditional information.
fn power_ratio_sum(sd: &SettingDist, e: f64) -> f64 {
    let (rows, cols, p) = sd.grid();
    let mut total = 0.0;
    for u in 0..rows {
        let pu = sd.marginal().probs()[u];
        if pu <= 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for t in 0..cols {
            let x = p[u * cols + t];
            if x > 0.0 {
                inner += (x / pu).powf(e);
            }
        }
        total += pu * inner;
    }
    total
}

pub fn shannon_setting_term(sd: &SettingDist) -> f64 {
    shannon_raw(sd.joint().probs()) - shannon_raw(sd.marginal().probs())
}

pub fn tsallis_setting_term(sd: &SettingDist, q: f64) -> f64 {
    if (q - 1.0).abs() < PARAM_ONE_TOL {
        return shannon_setting_term(sd);
    }
    (1.0 - power_ratio_sum(sd, q)) / (q - 1.0)
}

pub fn renyi_setting_term(sd: &SettingDist, r: f64) -> f64 {
    if (r - 1.0).abs() < PARAM_ONE_TOL {
        return shannon_setting_term(sd);
    }
    power_ratio_sum(sd, r).ln() / (1.0 - r)
}

/// Conditional-entropy steering criterion Σ_m S(B_m|A_m) ≥ ℬ_B.
pub fn steering_shannon(dists: &SettingDistributions, bound: &BoundValue) -> CriterionReport {
    let terms = dists.settings.iter().map(shannon_setting_term).collect();
    CriterionReport::from_terms(CriterionTag::ShannonConditional, terms, bound.clone())
}

/// Tsallis steering criterion in probability form:
/// (1/(q−1))·Σ_m [1 − Σ_{ut} p_{ut}^q / p_u^{q−1}] ≥ ℬ_B^{(q)}.
pub fn steering_tsallis(
    dists: &SettingDistributions,
    q: f64,
    bound: &BoundValue,
) -> CriterionReport {
    let terms = dists
        .settings
        .iter()
        .map(|sd| tsallis_setting_term(sd, q))
        .collect();
    CriterionReport::from_terms(CriterionTag::TsallisConditional { q }, terms, bound.clone())
}

/// Rényi steering criterion
/// (1/(1−r))·Σ_m ln[Σ_{ut} p_{ut}^r p_u^{1−r}] ≥ ℬ̃_B^{(r)}.
pub fn steering_renyi(dists: &SettingDistributions, r: f64, bound: &BoundValue) -> CriterionReport {
    let terms = dists
        .settings
        .iter()
        .map(|sd| renyi_setting_term(sd, r))
        .collect();
    CriterionReport::from_terms(CriterionTag::RenyiDivergence { r }, terms, bound.clone())
}

/// Correction term C(A,B) = Σ_u p_u^q (ln_q p_u)² − Σ_{ut} p_{ut}^q ln_q(p_u) ln_q(p_{ut}).
/// Zero-probability entries are skipped. For tripartite splits this is
/// T_q^{(1)} (untrusted Alice) or T_q^{(2)} (untrusted Alice and Bob).
pub fn tsallis_correction_term(sd: &SettingDist, q: f64) -> f64 {
    let (rows, cols, p) = sd.grid();
    let mut first = 0.0;
    let mut second = 0.0;
    for u in 0..rows {
        let pu = sd.marginal().probs()[u];
        if pu <= 0.0 {
            continue;
        }
        let lq_pu = q_log(pu, q).expect("positive");
        first += pu.powf(q) * lq_pu * lq_pu;
        for t in 0..cols {
            let x = p[u * cols + t];
            if x > 0.0 {
                second += x.powf(q) * lq_pu * q_log(x, q).expect("positive");
            }
        }
    }
    first - second
}

/// Entropy form of the Tsallis criterion term:
/// S_q(joint) − S_q(marginal) + (1−q)·C. Identical to
/// [`tsallis_setting_term`] on strictly positive distributions; exposed so
/// the identity can be asserted.
pub fn tsallis_entropy_form_term(sd: &SettingDist, q: f64) -> f64 {
    let cond = tsallis_raw(sd.joint().probs(), q) - tsallis_raw(sd.marginal().probs(), q);
    cond + (1.0 - q) * tsallis_correction_term(sd, q)
}

/// Global-observable criterion: Σ_m S_q(A_m ⊗ B_m) ≥ ℬ_B^{(q)}, where the
/// distribution of a degenerate product observable merges local outcomes by
/// equal eigenvalue products.
pub fn guhne_global(
    rho: &DensityMatrix,
    pairs: &[(Observable, Observable)],
    kind: EntropyKind,
    bound: &BoundValue,
) -> Result<CriterionReport, CriterionError> {
    let mut terms = Vec::with_capacity(pairs.len());
    for (oa, ob) in pairs {
        let dim = oa.basis.dim() * ob.basis.dim();
        if dim != rho.dim() {
            return Err(CriterionError::DimensionMismatch(format!(
                "observable pair acts on dimension {dim}, state has {}",
                rho.dim()
            )));
        }
        let w = kron(oa.basis.matrix(), ob.basis.matrix());
        let db = ob.basis.dim();
        let mut outcomes: Vec<(f64, f64)> = Vec::with_capacity(dim);
        for k in 0..dim {
            let col = w.column(k);
            let p = crate::linalg::vec_inner(&col, &rho.matrix().matvec(&col))
                .re
                .max(0.0);
            let value = oa.eigenvalues[k / db] * ob.eigenvalues[k % db];
            outcomes.push((value, p));
        }
        terms.push(entropy_raw(&merge_outcomes(outcomes), kind));
    }
    Ok(CriterionReport::from_terms(
        CriterionTag::GlobalObservable { kind },
        terms,
        bound.clone(),
    ))
}

fn merge_outcomes(mut outcomes: Vec<(f64, f64)>) -> Vec<f64> {
    outcomes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<f64> = Vec::new();
    let mut current_value = f64::NAN;
    for (v, p) in outcomes {
        if !current_value.is_nan() && (v - current_value).abs() <= 1e-9 {
            *merged.last_mut().unwrap() += p;
        } else {
            merged.push(p);
            current_value = v;
        }
    }
    let total: f64 = merged.iter().sum();
    merged.iter_mut().for_each(|p| *p /= total);
    merged
}

/// Recombination pattern for the permutation criterion: an n_A×n_B grid of
/// symbol indices 0..n_B in which every row is a permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationMatrix {
    grid: Vec<Vec<usize>>,
    symbols: usize,
}

impl PermutationMatrix {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<Self, CriterionError> {
        if grid.is_empty() {
            return Err(CriterionError::InvalidPermutationMatrix(
                "empty grid".into(),
            ));
        }
        let symbols = grid[0].len();
        for (i, row) in grid.iter().enumerate() {
            if row.len() != symbols {
                return Err(CriterionError::InvalidPermutationMatrix(format!(
                    "row {i} has length {}, expected {symbols}",
                    row.len()
                )));
            }
            let mut seen = vec![false; symbols];
            for &s in row {
                if s >= symbols || seen[s] {
                    return Err(CriterionError::InvalidPermutationMatrix(format!(
                        "row {i} is not a permutation of 0..{symbols}"
                    )));
                }
                seen[s] = true;
            }
        }
        Ok(PermutationMatrix { grid, symbols })
    }

    /// Every row the identity permutation: recombination collapses the
    /// untrusted index and returns the trusted marginal.
    pub fn trusted_marginal(n_a: usize, n_b: usize) -> Self {
        PermutationMatrix {
            grid: vec![(0..n_b).collect(); n_a],
            symbols: n_b,
        }
    }

    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// Σ_{ij} δ(q_ij, s_t)·p_ij for every symbol t.
    pub fn recombine(&self, rows: usize, cols: usize, p: &[f64]) -> Vec<f64> {
        assert_eq!(rows, self.grid.len());
        assert_eq!(cols, self.symbols);
        let mut out = vec![0.0; self.symbols];
        for (i, row) in self.grid.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                out[s] += p[i * cols + j];
            }
        }
        out
    }
}

/// Permutation-recombination criterion: per setting k the bipartite grid is
/// recombined through Q_k into n_B sums and the entropy applied; the sum over
/// settings is bounded below by the trusted party's EUR bound.
pub fn huang_permutation(
    dists: &SettingDistributions,
    q_mats: &[PermutationMatrix],
    kind: EntropyKind,
    bound: &BoundValue,
) -> Result<CriterionReport, CriterionError> {
    if q_mats.len() != dists.settings.len() {
        return Err(CriterionError::InvalidPermutationMatrix(format!(
            "{} permutation matrices for {} settings",
            q_mats.len(),
            dists.settings.len()
        )));
    }
    let mut terms = Vec::with_capacity(q_mats.len());
    for (sd, qm) in dists.settings.iter().zip(q_mats) {
        let (rows, cols, p) = sd.grid();
        if rows != qm.rows() || cols != qm.symbols() {
            return Err(CriterionError::InvalidPermutationMatrix(format!(
                "grid is {rows}x{cols}, permutation matrix is {}x{}",
                qm.rows(),
                qm.symbols()
            )));
        }
        terms.push(entropy_raw(&qm.recombine(rows, cols, p), kind));
    }
    Ok(CriterionReport::from_terms(
        CriterionTag::PermutationRecombination { kind },
        terms,
        bound.clone(),
    ))
}

/// Linear correlation criterion: steerability follows from ‖c‖ > 1. Reported
/// in margin form (lhs = 1 − ‖c‖ against bound 0) so the universal
/// "violated ⇔ lhs < bound" convention applies.
pub fn linear_criterion(c: &[f64; 3]) -> CriterionReport {
    let norm = (c.iter().map(|x| x * x).sum::<f64>()).sqrt();
    CriterionReport::from_terms(
        CriterionTag::LinearCorrelation,
        vec![1.0 - norm],
        BoundValue::analytic(0.0, "linear-correlation-norm"),
    )
}

/// Closed-form Tsallis criterion for isotropic states under m conjugate MUB
/// pairs:
/// (m/(q−1))·{1 − [ (1+(d−1)α)^q + (d−1)(1−α)^q ] / d^q } ≥ ℬ^{(q)}.
pub fn closed_form_isotropic(
    d: usize,
    m: usize,
    q: f64,
    alpha: f64,
) -> Result<CriterionReport, CriterionError> {
    let lo = -1.0 / ((d * d - 1) as f64);
    if !(lo..=1.0).contains(&alpha) {
        return Err(CriterionError::OutOfRange(format!(
            "alpha {alpha} outside [{lo}, 1]"
        )));
    }
    let bound = bound_tsallis_mub(d, m, q)?;
    let df = d as f64;
    let p_same = (1.0 + (df - 1.0) * alpha) / (df * df);
    let p_diff = (1.0 - alpha) / (df * df);
    let term = if (q - 1.0).abs() < PARAM_ONE_TOL {
        // Shannon limit: S(B|A) with uniform marginal 1/d
        let mut s = 0.0;
        if p_same > 0.0 {
            s -= df * p_same * p_same.ln();
        }
        if p_diff > 0.0 {
            s -= df * (df - 1.0) * p_diff * p_diff.ln();
        }
        s - df.ln()
    } else {
        let inner =
            ((1.0 + (df - 1.0) * alpha).powf(q) + (df - 1.0) * (1.0 - alpha).powf(q)) / df.powf(q);
        (1.0 - inner) / (q - 1.0)
    };
    Ok(CriterionReport::from_terms(
        CriterionTag::IsotropicClosedForm { q },
        vec![term; m],
        bound,
    ))
}

/// Closed-form q=2 criterion for a two-qubit state in Bloch normal form with
/// the three Pauli settings:
/// Σᵢ [1 − aᵢ² − bᵢ² − cᵢ² + 2aᵢbᵢcᵢ] / (2(1−aᵢ²)) ≥ 1.
pub fn closed_form_two_qubit_q2(p: &BlochParams) -> Result<CriterionReport, CriterionError> {
    let mut terms = Vec::with_capacity(3);
    for i in 0..3 {
        let (a, b, c) = (p.a[i], p.b[i], p.c[i]);
        if a.abs() >= 1.0 - 1e-9 {
            return Err(CriterionError::SingularMarginal { index: i, value: a });
        }
        terms.push((1.0 - a * a - b * b - c * c + 2.0 * a * b * c) / (2.0 * (1.0 - a * a)));
    }
    Ok(CriterionReport::from_terms(
        CriterionTag::TwoQubitClosedFormQ2,
        terms,
        bound_tsallis_mub(2, 3, 2.0)?,
    ))
}

/// Detection window of the q=2 criterion on the one-way family.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct OneWayWindow {
    /// Closed-form β above which the criterion detects steering.
    pub lower: f64,
    /// β_max up to which the state stays one-way steerable.
    pub upper: f64,
}

impl OneWayWindow {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }
}

/// Closed-form detection window for `m` ∈ {2,3} Pauli settings on the
/// one-way family at angle θ ∈ (0, π/4).
pub fn one_way_window(theta: f64, m: usize) -> Result<OneWayWindow, CriterionError> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_4) {
        return Err(CriterionError::OutOfRange(format!(
            "theta {theta} outside (0, π/4)"
        )));
    }
    let s2 = (2.0 * theta).sin();
    match m {
        2 => {
            let t = theta.tan();
            Ok(OneWayWindow {
                lower: (1.0 + t * t).sqrt() / (1.0 + t),
                upper: 1.0 / (1.0 + s2 * s2).sqrt(),
            })
        }
        3 => Ok(OneWayWindow {
            lower: (3.0 - (1.0 + 8.0 * s2 * s2).sqrt()).sqrt() / (2.0 * (2.0 * theta).cos()),
            upper: 1.0 / (1.0 + 2.0 * s2 * s2).sqrt(),
        }),
        _ => Err(CriterionError::OutOfRange(format!(
            "m must be 2 or 3, got {m}"
        ))),
    }
}

fn expect_split(
    dists: &SettingDistributions,
    parties: &[usize],
    untrusted: usize,
) -> Result<(), CriterionError> {
    for sd in &dists.settings {
        if !parties.contains(&sd.parties()) || sd.untrusted_parties() != untrusted {
            return Err(CriterionError::DimensionMismatch(format!(
                "expected {parties:?} parties with {untrusted} untrusted, got {} with {}",
                sd.parties(),
                sd.untrusted_parties()
            )));
        }
    }
    Ok(())
}

/// Tripartite criterion for Alice steering Bob and Charlie:
/// (1/(q−1))·Σ_m [1 − Σ_{ijk} p_{ijk}^q / p_i^{q−1}] ≥ 𝒞_BC^{(q)}.
/// The bound is a composite bound for the trusted pair; choosing its
/// separable or all-state variant is the caller's scenario decision.
pub fn tripartite_a_to_bc(
    dists: &SettingDistributions,
    q: f64,
    bound: &BoundValue,
) -> Result<CriterionReport, CriterionError> {
    expect_split(dists, &[3], 1)?;
    let terms = dists
        .settings
        .iter()
        .map(|sd| tsallis_setting_term(sd, q))
        .collect();
    Ok(CriterionReport::from_terms(
        CriterionTag::TripartiteOneToTwo { q },
        terms,
        bound.clone(),
    ))
}

/// Tripartite criterion for Alice and Bob steering Charlie:
/// (1/(q−1))·Σ_m [1 − Σ_{ijk} p_{ijk}^q / p_{ij}^{q−1}] ≥ ℬ_C^{(q)}.
/// Accepts local layouts (three parties, two untrusted) and global ones
/// (a dimension-4 joint measurement treated as one untrusted party).
pub fn tripartite_ab_to_c(
    dists: &SettingDistributions,
    q: f64,
    bound: &BoundValue,
) -> Result<CriterionReport, CriterionError> {
    for sd in &dists.settings {
        let ok = (sd.parties() == 3 && sd.untrusted_parties() == 2)
            || (sd.parties() == 2 && sd.untrusted_parties() == 1);
        if !ok {
            return Err(CriterionError::DimensionMismatch(
                "expected three parties with AB untrusted, or a global AB party".into(),
            ));
        }
    }
    let terms = dists
        .settings
        .iter()
        .map(|sd| tsallis_setting_term(sd, q))
        .collect();
    Ok(CriterionReport::from_terms(
        CriterionTag::TripartiteTwoToOne { q },
        terms,
        bound.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{bound_composite, bound_shannon_mub, BoundScenario};
    use crate::linalg::{random_unitary, RngSeed};
    use crate::measurements::{mub_complete, pauli_observable, pauli_set, pauli_triple, PauliAxis};
    use crate::states::{
        extract_bloch, isotropic, two_qubit_bloch, werner, BlochParams, StateFamily,
    };
    use rand::Rng;

    const LN2: f64 = std::f64::consts::LN_2;

    fn pauli_scenario() -> Scenario {
        Scenario::bipartite(pauli_triple(), pauli_triple()).unwrap()
    }

    fn b_shannon_23() -> BoundValue {
        bound_shannon_mub(2, 3).unwrap()
    }

    fn b_tsallis(d: usize, m: usize, q: f64) -> BoundValue {
        bound_tsallis_mub(d, m, q).unwrap()
    }

    #[test]
    fn assemblage_uniform_and_werner() {
        let flat = crate::states::noisy_family(
            &crate::linalg::DensityMatrix::from_pure(&crate::states::singlet_ket()),
            0.0,
        )
        .unwrap();
        let dists = assemblage(&flat, &pauli_scenario()).unwrap();
        for sd in &dists.settings {
            for &p in sd.joint().probs() {
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
        // Werner: p(equal) = (1−w)/4, p(opposite) = (1+w)/4 per setting
        let w = 0.6;
        let dists = assemblage(&werner(w).unwrap(), &pauli_scenario()).unwrap();
        for sd in &dists.settings {
            let p = sd.joint().probs();
            assert!((p[0] - (1.0 - w) / 4.0).abs() < 1e-10);
            assert!((p[1] - (1.0 + w) / 4.0).abs() < 1e-10);
            assert!((p[2] - (1.0 + w) / 4.0).abs() < 1e-10);
            assert!((p[3] - (1.0 - w) / 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn assemblage_isotropic_conjugate_mubs() {
        for d in [2usize, 3] {
            let alpha = 0.4;
            let rho = isotropic(d, alpha).unwrap();
            let alice = mub_complete(d).unwrap();
            let scenario = Scenario::bipartite(alice.clone(), alice.conjugate()).unwrap();
            let dists = assemblage(&rho, &scenario).unwrap();
            let df = d as f64;
            let p_same = (1.0 + (df - 1.0) * alpha) / (df * df);
            let p_diff = (1.0 - alpha) / (df * df);
            for sd in &dists.settings {
                let (rows, cols, p) = sd.grid();
                for i in 0..rows {
                    for j in 0..cols {
                        let expect = if i == j { p_same } else { p_diff };
                        assert!(
                            (p[i * cols + j] - expect).abs() < 1e-10,
                            "d={d} ({i},{j}): {}",
                            p[i * cols + j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn shannon_criterion_on_fixtures() {
        let dists = assemblage(&werner(0.0).unwrap(), &pauli_scenario()).unwrap();
        let rep = steering_shannon(&dists, &b_shannon_23());
        assert!((rep.lhs - 3.0 * LN2).abs() < 1e-10);
        assert!(!rep.violated);

        let dists = assemblage(&werner(1.0).unwrap(), &pauli_scenario()).unwrap();
        let rep = steering_shannon(&dists, &b_shannon_23());
        assert!(rep.lhs.abs() < 1e-9);
        assert!(rep.violated);
    }

    // independent oracle: per-setting S(B|A) of the Werner state in closed
    // form, root of 3(ln2 − h(w)) = 2 ln 2 found by bisection
    fn werner_shannon_threshold_oracle() -> f64 {
        let h = |w: f64| {
            let mut s = 0.0;
            if 1.0 + w > 0.0 {
                s += (1.0 + w) / 2.0 * (1.0 + w).ln();
            }
            if 1.0 - w > 0.0 {
                s += (1.0 - w) / 2.0 * (1.0 - w).ln();
            }
            s
        };
        let f = |w: f64| 3.0 * (LN2 - h(w)) - 2.0 * LN2;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn werner_shannon_threshold_matches_oracle() {
        let w_star = werner_shannon_threshold_oracle();
        assert!((w_star - 0.65).abs() < 0.01);
        let eval = |w: f64| {
            let dists = assemblage(&werner(w).unwrap(), &pauli_scenario()).unwrap();
            steering_shannon(&dists, &b_shannon_23()).violated
        };
        assert!(!eval(w_star - 1e-3));
        assert!(eval(w_star + 1e-3));
    }

    #[test]
    fn tsallis_criterion_thresholds() {
        let bound = b_tsallis(2, 3, 2.0);
        let w_star = 1.0 / 3.0_f64.sqrt();
        let eval = |w: f64| {
            let dists = assemblage(&werner(w).unwrap(), &pauli_scenario()).unwrap();
            steering_tsallis(&dists, 2.0, &bound).violated
        };
        assert!(!eval(w_star - 1e-3));
        assert!(eval(w_star + 1e-3));

        // maximally mixed: lhs = m·ln_q(d), never violated
        for (d, q) in [(2usize, 2.0), (3, 1.7)] {
            let rho = isotropic(d, 0.0).unwrap();
            let alice = mub_complete(d).unwrap();
            let scenario = Scenario::bipartite(alice.clone(), alice.conjugate()).unwrap();
            let dists = assemblage(&rho, &scenario).unwrap();
            let m = scenario.settings() as f64;
            let rep = steering_tsallis(&dists, q, &b_tsallis(d, d + 1, q));
            assert!((rep.lhs - m * q_log(d as f64, q).unwrap()).abs() < 1e-9);
            assert!(!rep.violated);
        }
    }

    #[test]
    fn renyi_criterion_behaviour() {
        let dists = assemblage(&werner(0.7).unwrap(), &pauli_scenario()).unwrap();
        let shannon = steering_shannon(&dists, &b_shannon_23()).lhs;
        let near_one = steering_renyi(&dists, 1.0 + 1e-7, &b_shannon_23()).lhs;
        assert!((near_one - shannon).abs() < 1e-6);

        let dists = assemblage(&werner(1.0).unwrap(), &pauli_scenario()).unwrap();
        for r in [0.5, 2.0, 5.0] {
            let rep = steering_renyi(&dists, r, &crate::bounds::bound_renyi_mub(2, 3, r).unwrap());
            assert!(rep.lhs.abs() < 1e-9, "r={r}");
            assert!(rep.violated);
        }
    }

    #[test]
    fn entropy_and_probability_forms_agree() {
        let mut rng = RngSeed(17).rng();
        for _ in 0..40 {
            // strictly positive random joint over a 3x4 grid
            let raw: Vec<f64> = (0..12).map(|_| rng.gen_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let sd =
                SettingDist::from_joint(raw.into_iter().map(|x| x / sum).collect(), vec![3, 4], 1)
                    .unwrap();
            for q in [0.5, 1.3, 2.0, 2.7] {
                let prob = tsallis_setting_term(&sd, q);
                let entr = tsallis_entropy_form_term(&sd, q);
                assert!((prob - entr).abs() < 1e-10, "q={q}: {prob} vs {entr}");
            }
        }
        // tripartite splits: T^{(1)} and T^{(2)}
        for untrusted in [1usize, 2] {
            let raw: Vec<f64> = (0..8).map(|_| rng.gen_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let sd = SettingDist::from_joint(
                raw.into_iter().map(|x| x / sum).collect(),
                vec![2, 2, 2],
                untrusted,
            )
            .unwrap();
            for q in [1.5, 2.0, 3.0] {
                let prob = tsallis_setting_term(&sd, q);
                let entr = tsallis_entropy_form_term(&sd, q);
                assert!((prob - entr).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn q_to_one_continuity() {
        for fam in [StateFamily::Werner, StateFamily::NoisyExampleTwo] {
            let rho = fam.state(0.8).unwrap();
            let dists = assemblage(&rho, &pauli_scenario()).unwrap();
            let shannon = steering_shannon(&dists, &b_shannon_23()).lhs;
            for q in [1.0 - 1e-6, 1.0 + 1e-6] {
                let t = steering_tsallis(&dists, q, &b_shannon_23()).lhs;
                assert!((t - shannon).abs() < 1e-4, "{fam:?} q={q}");
            }
        }
    }

    #[test]
    fn guhne_merging_and_bell_diagonal() {
        let singlet = werner(1.0).unwrap();
        let (za, zb) = (
            pauli_observable(PauliAxis::Z),
            pauli_observable(PauliAxis::Z),
        );
        let rep = guhne_global(
            &singlet,
            &[(za, zb)],
            EntropyKind::Shannon,
            &BoundValue::analytic(LN2, "shannon-mub-floor"),
        )
        .unwrap();
        // merged distribution is (0,1): outcomes with product −1 carry all weight
        assert!(rep.lhs.abs() < 1e-9);

        let pairs = || {
            vec![
                (
                    pauli_observable(PauliAxis::X),
                    pauli_observable(PauliAxis::X),
                ),
                (
                    pauli_observable(PauliAxis::Y),
                    pauli_observable(PauliAxis::Y),
                ),
                (
                    pauli_observable(PauliAxis::Z),
                    pauli_observable(PauliAxis::Z),
                ),
            ]
        };
        let bound = b_tsallis(2, 3, 2.0);
        for (c, expect) in [
            ([-0.55, -0.55, -0.55], false), // Σc² ≈ 0.91
            ([-0.60, -0.60, -0.60], true),  // Σc² = 1.08
        ] {
            let rho = two_qubit_bloch(&BlochParams {
                a: [0.0; 3],
                b: [0.0; 3],
                c,
            })
            .unwrap();
            let rep =
                guhne_global(&rho, &pairs(), EntropyKind::Tsallis { q: 2.0 }, &bound).unwrap();
            assert_eq!(rep.violated, expect, "c={c:?}");
            // Bell-diagonal + Pauli: same per-setting values as the conditional criterion
            let dists = assemblage(&rho, &pauli_scenario()).unwrap();
            let cond = steering_tsallis(&dists, 2.0, &bound);
            for (a, b) in rep.per_setting.iter().zip(&cond.per_setting) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn permutation_criterion() {
        // identity-permutation rows recombine to the trusted marginal
        let raw = vec![0.1, 0.2, 0.05, 0.15, 0.3, 0.2];
        let sd = SettingDist::from_joint(raw.clone(), vec![2, 3], 1).unwrap();
        let dists = SettingDistributions { settings: vec![sd] };
        let qm = PermutationMatrix::trusted_marginal(2, 3);
        let rep = huang_permutation(
            &dists,
            &[qm],
            EntropyKind::Shannon,
            &BoundValue::analytic(0.0, "shannon-mub-floor"),
        )
        .unwrap();
        let marg = [0.1 + 0.15, 0.2 + 0.3, 0.05 + 0.2];
        assert!((rep.lhs - shannon_raw(&marg)).abs() < 1e-12);

        // row-permutation grid on a 3x3 distribution
        let grid = vec![vec![2, 0, 1], vec![0, 2, 1], vec![1, 2, 0]];
        let qm = PermutationMatrix::new(grid).unwrap();
        let p: Vec<f64> = (1..=9).map(|x| x as f64 / 45.0).collect();
        let sd = SettingDist::from_joint(p.clone(), vec![3, 3], 1).unwrap();
        let dists = SettingDistributions { settings: vec![sd] };
        let rep = huang_permutation(
            &dists,
            &[qm.clone()],
            EntropyKind::Shannon,
            &BoundValue::analytic(0.0, "shannon-mub-floor"),
        )
        .unwrap();
        let groups = [
            p[1] + p[3] + p[8], // symbol 0 at (0,1),(1,0),(2,2)
            p[2] + p[5] + p[6], // symbol 1 at (0,2),(1,2),(2,0)
            p[0] + p[4] + p[7], // symbol 2 at (0,0),(1,1),(2,1)
        ];
        assert!((rep.lhs - shannon_raw(&groups)).abs() < 1e-12);

        // 2x2 anti-diagonal reproduces global-observable merging on the singlet
        let anti = PermutationMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let dists = assemblage(
            &werner(1.0).unwrap(),
            &Scenario::bipartite(
                pauli_set(&[PauliAxis::Z]).unwrap(),
                pauli_set(&[PauliAxis::Z]).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let rep = huang_permutation(
            &dists,
            &[anti],
            EntropyKind::Shannon,
            &BoundValue::analytic(0.0, "shannon-mub-floor"),
        )
        .unwrap();
        assert!(rep.lhs.abs() < 1e-9);

        assert!(PermutationMatrix::new(vec![vec![0, 0], vec![1, 0]]).is_err());
        assert!(PermutationMatrix::new(vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn linear_criterion_cases() {
        let werner_c = |w: f64| [-w, -w, -w];
        assert!(!linear_criterion(&werner_c(0.57)).violated);
        assert!(linear_criterion(&werner_c(0.58)).violated);
        assert!(!linear_criterion(&[1.0, 0.0, 0.0]).violated);
        assert!(linear_criterion(&[0.8, 0.8, 0.0]).violated);
    }

    #[test]
    fn isotropic_closed_form_matches_pipeline() {
        for d in [2usize, 3] {
            let alice = mub_complete(d).unwrap();
            let scenario = Scenario::bipartite(alice.clone(), alice.conjugate()).unwrap();
            let m = scenario.settings();
            for k in 0..200 {
                let alpha = k as f64 / 199.0;
                let q = 2.0;
                let closed = closed_form_isotropic(d, m, q, alpha).unwrap();
                let dists = assemblage(&isotropic(d, alpha).unwrap(), &scenario).unwrap();
                let pipeline = steering_tsallis(&dists, q, &closed.bound);
                assert!(
                    (closed.lhs - pipeline.lhs).abs() < 1e-10,
                    "d={d} α={alpha}: {} vs {}",
                    closed.lhs,
                    pipeline.lhs
                );
            }
        }
    }

    #[test]
    fn isotropic_closed_form_threshold() {
        for (d, m) in [(2usize, 3usize), (3, 4), (5, 6)] {
            let alpha_star = 1.0 / (m as f64).sqrt();
            assert!(
                !closed_form_isotropic(d, m, 2.0, alpha_star - 1e-6)
                    .unwrap()
                    .violated
            );
            assert!(
                closed_form_isotropic(d, m, 2.0, alpha_star + 1e-6)
                    .unwrap()
                    .violated
            );
        }
        assert!(!closed_form_isotropic(3, 4, 2.0, 0.0).unwrap().violated);
        assert!(closed_form_isotropic(2, 3, 2.0, 1.5).is_err());
    }

    #[test]
    fn two_qubit_closed_form() {
        let flat = BlochParams {
            a: [0.0; 3],
            b: [0.0; 3],
            c: [0.0; 3],
        };
        let rep = closed_form_two_qubit_q2(&flat).unwrap();
        assert!((rep.lhs - 1.5).abs() < 1e-12);
        assert!(!rep.violated);

        let w = 1.0 / 3.0_f64.sqrt();
        let near = |w: f64| BlochParams {
            a: [0.0; 3],
            b: [0.0; 3],
            c: [-w, -w, -w],
        };
        assert!(!closed_form_two_qubit_q2(&near(w - 1e-4)).unwrap().violated);
        assert!(closed_form_two_qubit_q2(&near(w + 1e-4)).unwrap().violated);

        let singular = BlochParams {
            a: [1.0, 0.0, 0.0],
            b: [0.0; 3],
            c: [0.0; 3],
        };
        assert!(matches!(
            closed_form_two_qubit_q2(&singular),
            Err(CriterionError::SingularMarginal { .. })
        ));
    }

    #[test]
    fn two_qubit_closed_form_matches_pipeline() {
        let mut rng = RngSeed(23).rng();
        let mut checked = 0;
        while checked < 200 {
            let p = BlochParams {
                a: [
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                ],
                b: [
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.5..0.5),
                ],
                c: [
                    rng.gen_range(-0.6..0.6),
                    rng.gen_range(-0.6..0.6),
                    rng.gen_range(-0.6..0.6),
                ],
            };
            let Ok(rho) = two_qubit_bloch(&p) else {
                continue;
            };
            checked += 1;
            let back = extract_bloch(&rho);
            let closed = closed_form_two_qubit_q2(&back).unwrap();
            let dists = assemblage(&rho, &pauli_scenario()).unwrap();
            let pipeline = steering_tsallis(&dists, 2.0, &closed.bound);
            assert!((closed.lhs - pipeline.lhs).abs() < 1e-10);
        }
    }

    #[test]
    fn one_way_window_values() {
        // θ = π/8, m = 2: (≈0.7654, ≈0.8165]
        let w = one_way_window(std::f64::consts::FRAC_PI_8, 2).unwrap();
        assert!((w.lower - 0.76537).abs() < 1e-4);
        assert!((w.upper - 0.81650).abs() < 1e-4);
        assert!(!w.is_empty());
        // near θ = π/4 the m=2 window collapses towards 1/√2
        let w = one_way_window(std::f64::consts::FRAC_PI_4 - 1e-6, 2).unwrap();
        assert!((w.lower - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
        assert!((w.upper - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
        assert!(one_way_window(0.0, 2).is_err());
        assert!(one_way_window(0.3, 4).is_err());
    }

    #[test]
    fn one_way_bisection_consistency() {
        // the q=2 criterion flips exactly at the closed-form lower edge
        let theta = std::f64::consts::FRAC_PI_8;
        for (m, axes) in [
            (2usize, vec![PauliAxis::X, PauliAxis::Z]),
            (3, vec![PauliAxis::X, PauliAxis::Y, PauliAxis::Z]),
        ] {
            let set = pauli_set(&axes).unwrap();
            let scenario = Scenario::bipartite(set.clone(), set).unwrap();
            let bound = b_tsallis(2, m, 2.0);
            let violated = |beta: f64| {
                let rho = crate::states::one_way(beta, theta).unwrap();
                let dists = assemblage(&rho, &scenario).unwrap();
                steering_tsallis(&dists, 2.0, &bound).violated
            };
            let w = one_way_window(theta, m).unwrap();
            assert!(!violated(w.lower - 1e-4), "m={m}");
            assert!(violated(w.lower + 1e-4), "m={m}");
        }
    }

    #[test]
    fn tripartite_split_validation() {
        let raw = vec![0.125; 8];
        let sd = SettingDist::from_joint(raw, vec![2, 2, 2], 1).unwrap();
        let dists = SettingDistributions { settings: vec![sd] };
        let bound = bound_composite(
            2,
            2,
            2,
            EntropyKind::Tsallis { q: 2.0 },
            BoundScenario::CompositeAny,
        )
        .unwrap();
        assert!(tripartite_a_to_bc(&dists, 2.0, &bound).is_ok());
        assert!(tripartite_ab_to_c(&dists, 2.0, &bound).is_err());
    }

    #[test]
    fn local_unitary_covariance() {
        let mut rng = RngSeed(29).rng();
        let rho = crate::linalg::random_density_hs_with(4, &mut rng);
        let scenario = pauli_scenario();
        let dists = assemblage(&rho, &scenario).unwrap();
        let base = steering_tsallis(&dists, 2.0, &b_tsallis(2, 3, 2.0));
        for k in 0..5 {
            let ua = random_unitary(2, RngSeed(500 + k));
            let ub = random_unitary(2, RngSeed(600 + k));
            let rotated_state = rho.conjugated_by(&kron(&ua, &ub)).unwrap();
            let rotated_scenario = scenario.rotated(&[ua, ub]).unwrap();
            let dists = assemblage(&rotated_state, &rotated_scenario).unwrap();
            let rep = steering_tsallis(&dists, 2.0, &b_tsallis(2, 3, 2.0));
            assert!((rep.lhs - base.lhs).abs() < 1e-10);
        }
    }

    #[test]
    fn monotone_noise_response() {
        // lhs grows as visibility decreases toward the maximally mixed state
        let families = [
            StateFamily::Werner,
            StateFamily::NoisyExampleTwo,
            StateFamily::NoisyExampleThree,
        ];
        for fam in families {
            let mut prev = f64::NEG_INFINITY;
            for k in (0..=20).rev() {
                let t = k as f64 / 20.0;
                let dists = assemblage(&fam.state(t).unwrap(), &pauli_scenario()).unwrap();
                let lhs = steering_tsallis(&dists, 2.0, &b_tsallis(2, 3, 2.0)).lhs;
                assert!(lhs >= prev - 1e-10, "{fam:?} at t={t}");
                prev = lhs;
            }
        }
    }

    #[test]
    fn marginal_mismatch_detected() {
        let joint = ProbDist::new(vec![0.25; 4]).unwrap();
        let wrong = ProbDist::new(vec![0.7, 0.3]).unwrap();
        assert!(matches!(
            SettingDist::from_parts(joint, wrong, vec![2, 2], 1),
            Err(CriterionError::MarginalMismatch { .. })
        ));
    }
}
