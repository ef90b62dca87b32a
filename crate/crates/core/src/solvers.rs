//! Noise-threshold bisection, parameter sweeps, measurement optimization
//! over local unitaries, and the random-state survey of the two-qubit
//! criteria comparison.

use crate::bounds::{bound_for_single, BoundValue};
use crate::criteria::{
    assemblage, closed_form_two_qubit_q2, linear_criterion, steering_renyi, steering_shannon,
    steering_tsallis, tripartite_a_to_bc, tripartite_ab_to_c, CriterionError, CriterionReport,
    Scenario, VIOLATION_TOL,
};
use crate::entropy::{entropy_raw, EntropyKind};
use crate::linalg::{random_density_hs_with, unitary_from_angles, DensityMatrix, RngSeed};
use crate::measurements::MeasurementSet;
use crate::states::{BlochParams, StateError, StateFamily};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("criterion is not violated anywhere on the family (checked up to parameter 1)")]
    NoViolation,
    #[error("verdict is not monotone in the family parameter near {at}")]
    NonMonotone { at: f64 },
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// How a criterion report should be produced from a state.
#[derive(Clone, Debug)]
enum Dispatch {
    Bipartite,
    OneToTwo,
    TwoToOne,
}

/// A runnable steering check: entropy choice, measurement layout and bound.
#[derive(Clone, Debug)]
pub struct CriterionConfig {
    kind: EntropyKind,
    scenario: Scenario,
    bound: BoundValue,
    dispatch: Dispatch,
    label: String,
}

impl CriterionConfig {
    /// Bipartite check with the trusted party's bound taken from the catalog
    /// for its dimension and setting count.
    pub fn bipartite(
        kind: EntropyKind,
        alice: MeasurementSet,
        bob: MeasurementSet,
    ) -> Result<Self, SolverError> {
        let bound = bound_for_single(kind, bob.dim(), bob.len()).map_err(CriterionError::Bound)?;
        let label = format!("{}+{}mubs", kind_label(kind), bob.len());
        let scenario = Scenario::bipartite(alice, bob)?;
        Ok(CriterionConfig {
            kind,
            scenario,
            bound,
            dispatch: Dispatch::Bipartite,
            label,
        })
    }

    /// Bipartite check with an explicit bound.
    pub fn bipartite_with_bound(
        kind: EntropyKind,
        alice: MeasurementSet,
        bob: MeasurementSet,
        bound: BoundValue,
    ) -> Result<Self, SolverError> {
        let label = format!("{}+custom-bound", kind_label(kind));
        let scenario = Scenario::bipartite(alice, bob)?;
        Ok(CriterionConfig {
            kind,
            scenario,
            bound,
            dispatch: Dispatch::Bipartite,
            label,
        })
    }

    /// Alice steering Bob and Charlie; the composite bound (separable or
    /// all-state) is the caller's choice.
    pub fn a_to_bc(
        kind: EntropyKind,
        sets: [MeasurementSet; 3],
        bound: BoundValue,
    ) -> Result<Self, SolverError> {
        let label = format!("a-to-bc-{}", kind_label(kind));
        let scenario = Scenario::new(1, sets.to_vec())?;
        Ok(CriterionConfig {
            kind,
            scenario,
            bound,
            dispatch: Dispatch::OneToTwo,
            label,
        })
    }

    /// Alice and Bob steering Charlie with local measurements; the bound is
    /// Charlie's single-system bound from the catalog.
    pub fn ab_to_c_local(
        kind: EntropyKind,
        sets: [MeasurementSet; 3],
    ) -> Result<Self, SolverError> {
        let charlie = &sets[2];
        let bound =
            bound_for_single(kind, charlie.dim(), charlie.len()).map_err(CriterionError::Bound)?;
        let label = format!("ab-to-c-local-{}", kind_label(kind));
        let scenario = Scenario::new(2, sets.to_vec())?;
        Ok(CriterionConfig {
            kind,
            scenario,
            bound,
            dispatch: Dispatch::TwoToOne,
            label,
        })
    }

    /// Alice and Bob steering Charlie with global (joint) measurements of
    /// dimension d_A·d_B.
    pub fn ab_to_c_global(
        kind: EntropyKind,
        joint_ab: MeasurementSet,
        charlie: MeasurementSet,
    ) -> Result<Self, SolverError> {
        let bound =
            bound_for_single(kind, charlie.dim(), charlie.len()).map_err(CriterionError::Bound)?;
        let label = format!("ab-to-c-global-{}", kind_label(kind));
        let scenario = Scenario::new(1, vec![joint_ab, charlie])?;
        Ok(CriterionConfig {
            kind,
            scenario,
            bound,
            dispatch: Dispatch::TwoToOne,
            label,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bound(&self) -> &BoundValue {
        &self.bound
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<CriterionReport, CriterionError> {
        self.run(rho, &self.scenario)
    }

    /// Same check with each party's measurement set rotated by its own
    /// unitary; the bound is unchanged (shared rotations preserve the MUB
    /// structure the bound relies on).
    fn evaluate_rotated(
        &self,
        rho: &DensityMatrix,
        unitaries: &[crate::linalg::ComplexMatrix],
    ) -> Result<CriterionReport, CriterionError> {
        let rotated = self.scenario.rotated(unitaries)?;
        self.run(rho, &rotated)
    }

    fn run(
        &self,
        rho: &DensityMatrix,
        scenario: &Scenario,
    ) -> Result<CriterionReport, CriterionError> {
        let dists = assemblage(rho, scenario)?;
        match self.dispatch {
            Dispatch::Bipartite => Ok(match self.kind {
                EntropyKind::Shannon => steering_shannon(&dists, &self.bound),
                EntropyKind::Tsallis { q } => steering_tsallis(&dists, q, &self.bound),
                EntropyKind::Renyi { r } => steering_renyi(&dists, r, &self.bound),
            }),
            Dispatch::OneToTwo => tripartite_a_to_bc(&dists, tsallis_q(self.kind)?, &self.bound),
            Dispatch::TwoToOne => tripartite_ab_to_c(&dists, tsallis_q(self.kind)?, &self.bound),
        }
    }
}

fn tsallis_q(kind: EntropyKind) -> Result<f64, CriterionError> {
    match kind {
        EntropyKind::Shannon => Ok(1.0),
        EntropyKind::Tsallis { q } => Ok(q),
        EntropyKind::Renyi { .. } => Err(CriterionError::OutOfRange(
            "tripartite criteria are defined for Shannon and Tsallis entropies".into(),
        )),
    }
}

fn kind_label(kind: EntropyKind) -> String {
    match kind {
        EntropyKind::Shannon => "shannon".into(),
        EntropyKind::Tsallis { q } => format!("tsallis-q{q}"),
        EntropyKind::Renyi { r } => format!("renyi-r{r}"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    pub critical: f64,
    pub resolution: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
    pub family: String,
    pub criterion: String,
}

pub const DEFAULT_RESOLUTION: f64 = 1e-4;
const PRESCAN_POINTS: usize = 11;

enum ScanOutcome {
    Bracket(usize),
    AllClear,
    NonMonotone(usize),
}

fn classify_scan(flags: &[bool]) -> ScanOutcome {
    let first_violated = flags.iter().position(|&v| v);
    match first_violated {
        None => ScanOutcome::AllClear,
        Some(0) => ScanOutcome::NonMonotone(0),
        Some(k) => {
            if flags[k..].iter().all(|&v| v) {
                ScanOutcome::Bracket(k)
            } else {
                let bad = flags[k..].iter().position(|&v| !v).unwrap() + k;
                ScanOutcome::NonMonotone(bad)
            }
        }
    }
}

/// Critical family parameter above which the criterion detects steering,
/// found by bisection after an 11-point monotonicity pre-scan.
pub fn threshold_bisect(
    family: &StateFamily,
    config: &CriterionConfig,
    resolution: f64,
) -> Result<ThresholdResult, SolverError> {
    assert!(resolution > 0.0 && resolution < 1.0);
    let mut evaluations = 0usize;
    let mut verdict = |t: f64| -> Result<bool, SolverError> {
        evaluations += 1;
        let rho = family.state(t)?;
        Ok(config.evaluate(&rho)?.violated)
    };
    let grid: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|k| k as f64 / (PRESCAN_POINTS - 1) as f64)
        .collect();
    let mut flags = Vec::with_capacity(grid.len());
    for &t in &grid {
        flags.push(verdict(t)?);
    }
    let k = match classify_scan(&flags) {
        ScanOutcome::AllClear => return Err(SolverError::NoViolation),
        ScanOutcome::NonMonotone(i) => return Err(SolverError::NonMonotone { at: grid[i] }),
        ScanOutcome::Bracket(k) => k,
    };
    let (mut lo, mut hi) = (grid[k - 1], grid[k]);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if verdict(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdResult {
        critical: 0.5 * (lo + hi),
        resolution,
        bracket: (lo, hi),
        evaluations,
        family: family.label(),
        criterion: config.label().to_string(),
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    TsallisQ,
    RenyiR,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub param: f64,
    pub threshold: Option<f64>,
    pub bound: Option<BoundValue>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCurve {
    pub axis: SweepAxis,
    pub family: String,
    pub points: Vec<SweepPoint>,
}

/// One threshold bisection per grid point of the entropy parameter. Points
/// where the criterion never fires are encoded explicitly; per-point errors
/// never abort the sweep.
pub fn sweep_parameter(
    family: &StateFamily,
    alice: &MeasurementSet,
    bob: &MeasurementSet,
    axis: SweepAxis,
    grid: &[f64],
    resolution: f64,
) -> Result<SweepCurve, SolverError> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SolverError::Criterion(CriterionError::OutOfRange(
            "parameter grid must be strictly increasing".into(),
        )));
    }
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|&param| {
            let kind = match axis {
                SweepAxis::TsallisQ => EntropyKind::Tsallis { q: param },
                SweepAxis::RenyiR => EntropyKind::Renyi { r: param },
            };
            let run =
                CriterionConfig::bipartite(kind, alice.clone(), bob.clone()).and_then(|config| {
                    let bound = config.bound().clone();
                    threshold_bisect(family, &config, resolution).map(|r| (r, bound))
                });
            match run {
                Ok((r, bound)) => SweepPoint {
                    param,
                    threshold: Some(r.critical),
                    bound: Some(bound),
                    error: None,
                },
                Err(SolverError::NoViolation) => SweepPoint {
                    param,
                    threshold: None,
                    bound: None,
                    error: None,
                },
                Err(e) => SweepPoint {
                    param,
                    threshold: None,
                    bound: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(SweepCurve {
        axis,
        family: family.label(),
        points,
    })
}

/// Best measurement rotation found: one unitary per party applied to that
/// party's whole set (which preserves mutual unbiasedness, so the configured
/// bound stays valid).
pub struct OptimizedMeasurements {
    pub sets: Vec<MeasurementSet>,
    pub report: CriterionReport,
    pub restarts: usize,
}

/// Maximize bound − lhs (the violation strength) over per-party unitary
/// rotations with multi-start compass search. The unrotated configuration is
/// always restart zero, so the result is never worse than the input settings.
pub fn optimize_measurements(
    rho: &DensityMatrix,
    config: &CriterionConfig,
    restarts: usize,
    seed: RngSeed,
) -> Result<OptimizedMeasurements, SolverError> {
    let dims: Vec<usize> = config.scenario().party_dims().to_vec();
    let total_params: usize = dims.iter().map(|d| d * d).sum();
    let objective = |x: &[f64]| -> f64 {
        let mut offset = 0;
        let mut unitaries = Vec::with_capacity(dims.len());
        for &d in &dims {
            unitaries
                .push(unitary_from_angles(d, &x[offset..offset + d * d]).expect("parameter count"));
            offset += d * d;
        }
        match config.evaluate_rotated(rho, &unitaries) {
            Ok(report) => report.margin(),
            Err(_) => f64::INFINITY,
        }
    };
    let outcomes: Vec<(f64, Vec<f64>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut x = if k == 0 {
                vec![0.0; total_params]
            } else {
                let mut rng = seed.child(k as u64).rng();
                use rand::Rng;
                (0..total_params)
                    .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect()
            };
            let (value, _, _) = crate::optim::compass_search(&objective, &mut x, 20_000, 1e-5);
            (value, x)
        })
        .collect();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.0.partial_cmp(&b.0).unwrap().then(ia.cmp(ib)))
        .map(|(_, o)| o)
        .expect("at least one restart");
    let mut offset = 0;
    let mut unitaries = Vec::with_capacity(dims.len());
    for &d in &dims {
        unitaries.push(unitary_from_angles(d, &best.1[offset..offset + d * d]).unwrap());
        offset += d * d;
    }
    let rotated = config.scenario().rotated(&unitaries)?;
    let report = config.evaluate_rotated(rho, &unitaries)?;
    Ok(OptimizedMeasurements {
        sets: rotated.sets().to_vec(),
        report,
        restarts: restarts.max(1),
    })
}

/// Criteria compared in the random-state survey.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyCriterion {
    /// Closed-form q=2 criterion on the Bloch normal form.
    ClosedFormQ2,
    /// Global-observable criterion at q=2 with three Pauli products.
    GlobalQ2,
    /// Linear correlation-norm test.
    Linear,
}

pub const SURVEY_CRITERIA: [SurveyCriterion; 3] = [
    SurveyCriterion::ClosedFormQ2,
    SurveyCriterion::GlobalQ2,
    SurveyCriterion::Linear,
];

#[derive(Clone, Debug, Serialize)]
pub struct SurveyTable {
    pub n: usize,
    pub seed: u64,
    pub criteria: Vec<SurveyCriterion>,
    /// Counts indexed by violation bit pattern (bit k set when the k-th criterion fired).
    pub pattern_counts: Vec<usize>,
}

impl SurveyTable {
    fn idx(&self, c: SurveyCriterion) -> Option<usize> {
        self.criteria.iter().position(|&x| x == c)
    }

    pub fn count_where(&self, predicate: impl Fn(usize) -> bool) -> usize {
        self.pattern_counts
            .iter()
            .enumerate()
            .filter(|(pattern, _)| predicate(*pattern))
            .map(|(_, c)| c)
            .sum()
    }

    pub fn none_violated(&self) -> usize {
        self.count_where(|p| p == 0)
    }

    pub fn all_violated(&self) -> usize {
        let full = (1usize << self.criteria.len()) - 1;
        self.count_where(|p| p == full)
    }

    /// States violating the closed-form criterion and nothing else.
    pub fn only_closed_form(&self) -> usize {
        match self.idx(SurveyCriterion::ClosedFormQ2) {
            Some(i) => self.count_where(|p| p == 1 << i),
            None => 0,
        }
    }

    /// States violating the linear test without the closed-form one.
    pub fn linear_without_closed_form(&self) -> usize {
        match (
            self.idx(SurveyCriterion::Linear),
            self.idx(SurveyCriterion::ClosedFormQ2),
        ) {
            (Some(l), Some(g)) => self.count_where(|p| p & (1 << l) != 0 && p & (1 << g) == 0),
            _ => 0,
        }
    }

    pub fn fraction(&self, count: usize) -> f64 {
        count as f64 / self.n as f64
    }

    /// Wilson 95% confidence interval for a count.
    pub fn wilson(&self, count: usize) -> (f64, f64) {
        wilson_interval(count, self.n, 1.96)
    }
}

pub fn wilson_interval(count: usize, n: usize, z: f64) -> (f64, f64) {
    let nf = n as f64;
    let p = count as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Monte-Carlo survey over Hilbert-Schmidt random two-qubit states.
///
/// Each sample is brought to the Bloch normal form by a signed SVD of its
/// correlation matrix (local rotations absorb the sign ambiguity), then every
/// requested criterion is evaluated on the canonical parameters. Sample `i`
/// uses generator stream `i`, so the table is reproducible for a given seed
/// and independent of the worker count.
pub fn survey_random(n: usize, seed: RngSeed, criteria: &[SurveyCriterion]) -> SurveyTable {
    assert!(n >= 1, "need at least one sample");
    assert!(!criteria.is_empty(), "need at least one criterion");
    let patterns: Vec<u8> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.stream_rng(i);
            let rho = random_density_hs_with(4, &mut rng);
            let (a, b, c) = canonical_bloch(&rho);
            let mut bits = 0u8;
            for (k, crit) in criteria.iter().enumerate() {
                let fired = match crit {
                    SurveyCriterion::ClosedFormQ2 => {
                        closed_form_two_qubit_q2(&BlochParams { a, b, c })
                            .map(|r| r.violated)
                            .unwrap_or(false)
                    }
                    SurveyCriterion::GlobalQ2 => global_q2_violated(&c),
                    SurveyCriterion::Linear => linear_criterion(&c).violated,
                };
                if fired {
                    bits |= 1 << k;
                }
            }
            bits
        })
        .collect();
    let mut pattern_counts = vec![0usize; 1 << criteria.len()];
    for bits in patterns {
        pattern_counts[bits as usize] += 1;
    }
    SurveyTable {
        n,
        seed: seed.0,
        criteria: criteria.to_vec(),
        pattern_counts,
    }
}

/// Global-observable value at q=2 for a Bloch-diagonal state: the merged
/// distribution of σᵢ⊗σᵢ is ((1+cᵢ)/2, (1−cᵢ)/2) independent of the local
/// vectors.
fn global_q2_violated(c: &[f64; 3]) -> bool {
    let lhs: f64 = c
        .iter()
        .map(|&ci| {
            entropy_raw(
                &[(1.0 + ci) / 2.0, (1.0 - ci) / 2.0],
                EntropyKind::Tsallis { q: 2.0 },
            )
        })
        .sum();
    lhs < 1.0 - VIOLATION_TOL
}

/// Local-unitary normal form: T = U·diag(c)·Vᵀ with U, V ∈ SO(3), then
/// a' = Uᵀa, b' = Vᵀb. The sign of c₃ absorbs the determinant fixes.
pub fn canonical_bloch(rho: &DensityMatrix) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let bl = crate::states::extract_bloch(rho);
    let t = crate::states::correlation_matrix(rho);
    let (u, s, v) = svd3_signed(&t);
    let rot_t = |m: &[[f64; 3]; 3], x: &[f64; 3]| {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| m[k][i] * x[k]).sum();
        }
        out
    };
    (rot_t(&u, &bl.a), rot_t(&v, &bl.b), s)
}

fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn jacobi_sym3(mut a: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut v = [[0.0; 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..64 {
        let off = a[0][1].abs() + a[0][2].abs() + a[1][2].abs();
        if off < 1e-15 {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-18 {
                continue;
            }
            let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                1.0 / (tau - (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Signed SVD of a real 3×3 matrix: T = U·diag(s)·Vᵀ with det U = det V = 1;
/// the last singular value carries any sign needed for the rotations.
pub fn svd3_signed(t: &[[f64; 3]; 3]) -> ([[f64; 3]; 3], [f64; 3], [[f64; 3]; 3]) {
    let tt = mat3_mul(&transpose3(t), t);
    let (eigs, vectors) = jacobi_sym3(tt);
    // order descending by eigenvalue
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap());
    let mut v = [[0.0; 3]; 3];
    let mut s = [0.0; 3];
    for (new, &old) in order.iter().enumerate() {
        s[new] = eigs[old].max(0.0).sqrt();
        for r in 0..3 {
            v[r][new] = vectors[r][old];
        }
    }
    let mut u = [[0.0; 3]; 3];
    let mut have = 0;
    for j in 0..3 {
        if s[j] > 1e-12 {
            for r in 0..3 {
                u[r][j] = (0..3).map(|k| t[r][k] * v[k][j]).sum::<f64>() / s[j];
            }
            have = j + 1;
        }
    }
    // complete deficient columns to an orthonormal frame
    if have < 3 {
        for j in have..3 {
            let col = if j == 2 {
                cross([u[0][0], u[1][0], u[2][0]], [u[0][1], u[1][1], u[2][1]])
            } else {
                // pick the axis least aligned with the existing columns
                let mut best = [1.0, 0.0, 0.0];
                let mut best_score = f64::INFINITY;
                for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
                    let mut score = 0.0;
                    for k in 0..j {
                        let dot: f64 = (0..3).map(|r| u[r][k] * axis[r]).sum();
                        score += dot * dot;
                    }
                    if score < best_score {
                        best_score = score;
                        best = axis;
                    }
                }
                let mut w = best;
                for k in 0..j {
                    let dot: f64 = (0..3).map(|r| u[r][k] * w[r]).sum();
                    for (r, wr) in w.iter_mut().enumerate() {
                        *wr -= dot * u[r][k];
                    }
                }
                normalize3(w)
            };
            let col = normalize3(col);
            for r in 0..3 {
                u[r][j] = col[r];
            }
        }
    }
    if det3(&u) < 0.0 {
        for row in u.iter_mut() {
            row[2] = -row[2];
        }
        s[2] = -s[2];
    }
    if det3(&v) < 0.0 {
        for row in v.iter_mut() {
            row[2] = -row[2];
        }
        s[2] = -s[2];
    }
    (u, s, v)
}

fn transpose3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}
