//! Catalog of entropic uncertainty bounds for MUB measurements (analytic and
//! conjectured formulas), plus a derivative-free minimizer that certifies a
//! bound by direct minimization of Σ_m S(X_m) over pure states.

use crate::entropy::{entropy_raw, q_log, EntropyKind, PARAM_ONE_TOL};
use crate::linalg::{kron, vec_norm, ComplexMatrix, RngSeed};
use crate::measurements::MeasurementSet;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("bound parameters out of range: {0}")]
    OutOfRange(String),
    #[error("no catalog bound for this combination: {0}")]
    UnsupportedCombination(String),
    #[error("minimizer budget exhausted before convergence; best value so far {best}")]
    BudgetExceeded { best: f64 },
    #[error("invalid measurement input: {0}")]
    InvalidInput(String),
}

/// Where a bound value comes from. Conjectured entries carry the caveat
/// window reported for them, and numerical entries the minimizer statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "provenance", rename_all = "lowercase")]
pub enum Provenance {
    Analytic {
        rule: &'static str,
    },
    Conjectured {
        rule: &'static str,
        caveat: Option<&'static str>,
    },
    Numerical {
        restarts: usize,
        evaluations: usize,
        converged: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    #[serde(flatten)]
    pub provenance: Provenance,
}

impl BoundValue {
    pub fn analytic(value: f64, rule: &'static str) -> Self {
        BoundValue {
            value,
            provenance: Provenance::Analytic { rule },
        }
    }

    pub fn conjectured(value: f64, rule: &'static str, caveat: Option<&'static str>) -> Self {
        BoundValue {
            value,
            provenance: Provenance::Conjectured { rule, caveat },
        }
    }

    pub fn is_conjectured(&self) -> bool {
        matches!(self.provenance, Provenance::Conjectured { .. })
    }
}

const NON_OPTIMAL_WINDOW: &str = "pure-state minimum dips below the formula for q in (2,3)";

/// Which system the bound constrains.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundScenario {
    Single,
    CompositeSeparable,
    CompositeAny,
}

fn check_mub_count(d: usize, m: usize) -> Result<(), BoundError> {
    if d < 2 {
        return Err(BoundError::OutOfRange(format!("dimension {d} < 2")));
    }
    if m < 2 || m > d + 1 {
        return Err(BoundError::OutOfRange(format!(
            "measurement count {m} outside 2..={}",
            d + 1
        )));
    }
    Ok(())
}

/// Floor-function bound for m MUBs in dimension d:
/// m·ln K + (K+1)(m − K(d+m−1)/d)·ln(1 + 1/K), K = ⌊md/(d+m−1)⌋.
fn shannon_floor_formula(d: usize, m: usize) -> f64 {
    let df = d as f64;
    let mf = m as f64;
    let k = (mf * df / (df + mf - 1.0)).floor();
    mf * k.ln() + (k + 1.0) * (mf - k * (df + mf - 1.0) / df) * (1.0 + 1.0 / k).ln()
}

/// Complete-set bound: (d+1)·ln((d+1)/2) for odd d,
/// (d/2)·ln(d/2) + (d/2+1)·ln(d/2+1) for even d.
fn shannon_complete_formula(d: usize) -> f64 {
    let df = d as f64;
    if d % 2 == 1 {
        (df + 1.0) * ((df + 1.0) / 2.0).ln()
    } else {
        let h = df / 2.0;
        h * h.ln() + (h + 1.0) * (h + 1.0).ln()
    }
}

/// Shannon EUR bound for m MUBs in dimension d; for a complete set the
/// dedicated odd/even formula applies and the maximum of the applicable
/// formulas is returned.
pub fn bound_shannon_mub(d: usize, m: usize) -> Result<BoundValue, BoundError> {
    check_mub_count(d, m)?;
    let floor = shannon_floor_formula(d, m);
    if m == d + 1 {
        let complete = shannon_complete_formula(d);
        if complete >= floor {
            return Ok(BoundValue::analytic(complete, "shannon-mub-complete"));
        }
    }
    Ok(BoundValue::analytic(floor, "shannon-mub-floor"))
}

/// Tsallis EUR bound for m MUBs in dimension d.
///
/// Candidates: the proven low-q formula m·ln_q(md/(d+m−1)) for q ∈ (0,2],
/// the conjectured high-q formula (m−1)·ln_q(d) for q ≥ 2, and for qubits
/// the (m−1)·ln_q(2) bound, proven on q ∈ [2n−1, 2n] for m = 2 and known
/// numerically otherwise except inside (2,3). The largest applicable value
/// wins; ties prefer an analytic provenance.
pub fn bound_tsallis_mub(d: usize, m: usize, q: f64) -> Result<BoundValue, BoundError> {
    check_mub_count(d, m)?;
    if !(q > 0.0) {
        return Err(BoundError::OutOfRange(format!(
            "q must be positive, got {q}"
        )));
    }
    if (q - 1.0).abs() < PARAM_ONE_TOL {
        return bound_shannon_mub(d, m);
    }
    let df = d as f64;
    let mf = m as f64;
    let mut candidates: Vec<BoundValue> = Vec::new();
    if q <= 2.0 {
        let v = mf * q_log(mf * df / (df + mf - 1.0), q).expect("argument > 0");
        candidates.push(BoundValue::analytic(v, "tsallis-mub-low-q"));
    }
    if q >= 2.0 {
        let v = (mf - 1.0) * q_log(df, q).expect("argument > 0");
        let caveat = if q < 3.0 {
            Some(NON_OPTIMAL_WINDOW)
        } else {
            None
        };
        candidates.push(BoundValue::conjectured(v, "tsallis-mub-high-q", caveat));
    }
    if d == 2 {
        let v = (mf - 1.0) * q_log(2.0, q).expect("argument > 0");
        // proven windows q ∈ [2n−1, 2n] for the Pauli pair
        let n = (q / 2.0).ceil();
        let proven = m == 2 && q >= 2.0 * n - 1.0 && q <= 2.0 * n;
        let bv = if proven {
            BoundValue::analytic(v, "tsallis-qubit-pauli")
        } else {
            let caveat = if q > 2.0 && q < 3.0 {
                Some(NON_OPTIMAL_WINDOW)
            } else {
                None
            };
            BoundValue::conjectured(v, "tsallis-qubit-pauli", caveat)
        };
        candidates.push(bv);
    }
    pick_best(candidates)
}

fn pick_best(candidates: Vec<BoundValue>) -> Result<BoundValue, BoundError> {
    candidates
        .into_iter()
        .max_by(|a, b| {
            a.value.partial_cmp(&b.value).unwrap().then_with(|| {
                // on ties an analytic provenance outranks a conjectured one
                let rank = |x: &BoundValue| u8::from(!x.is_conjectured());
                rank(a).cmp(&rank(b))
            })
        })
        .ok_or_else(|| BoundError::UnsupportedCombination("no applicable formula".into()))
}

const RENYI_MID_WINDOW: &str =
    "pure-state minimum dips below the Shannon value for r in (1,2); certify per use";

/// Rényi EUR bound for m MUBs: equal to the Shannon bound for r ∈ (0,2),
/// and m·r/(2(r−1))·ln(md/(d+m−1)) for r ≥ 2.
///
/// On (0,1] the Shannon value is implied by monotonicity of the Rényi
/// entropy in its order. On (1,2) it is catalogued with a caveat: direct
/// minimization finds pure states below it (e.g. 1.3573 < 2 ln 2 for the
/// qubit Pauli triple at r = 1.5).
pub fn bound_renyi_mub(d: usize, m: usize, r: f64) -> Result<BoundValue, BoundError> {
    check_mub_count(d, m)?;
    if !(r > 0.0) {
        return Err(BoundError::OutOfRange(format!(
            "r must be positive, got {r}"
        )));
    }
    if r < 2.0 {
        let shannon = bound_shannon_mub(d, m)?;
        return Ok(if r <= 1.0 + PARAM_ONE_TOL {
            BoundValue::analytic(shannon.value, "renyi-equals-shannon")
        } else {
            BoundValue::conjectured(
                shannon.value,
                "renyi-equals-shannon",
                Some(RENYI_MID_WINDOW),
            )
        });
    }
    let df = d as f64;
    let mf = m as f64;
    let v = mf * r / (2.0 * (r - 1.0)) * (mf * df / (df + mf - 1.0)).ln();
    Ok(BoundValue::analytic(v, "renyi-high-r"))
}

/// Single-party bound dispatch by entropy kind.
pub fn bound_for_single(kind: EntropyKind, d: usize, m: usize) -> Result<BoundValue, BoundError> {
    match kind {
        EntropyKind::Shannon => bound_shannon_mub(d, m),
        EntropyKind::Tsallis { q } => bound_tsallis_mub(d, m, q),
        EntropyKind::Renyi { r } => bound_renyi_mub(d, m, r),
    }
}

/// Composite-system bound for m MUB settings measured on both subsystems.
///
/// Shannon separable bounds add the single-system floor formulas of the two
/// parties. The two-qubit entries follow the catalog: for three settings the
/// all-state bound is 3·ln_q 2 on 1 ≤ q ≤ 2 and 2·ln_q 4 for q ≥ 2, where
/// the q ≥ 2 value is already reached by separable states.
pub fn bound_composite(
    d_a: usize,
    d_b: usize,
    m: usize,
    kind: EntropyKind,
    scenario: BoundScenario,
) -> Result<BoundValue, BoundError> {
    if scenario == BoundScenario::Single {
        return Err(BoundError::UnsupportedCombination(
            "single-system scenario passed to the composite catalog".into(),
        ));
    }
    let qubits = d_a == 2 && d_b == 2;
    match kind {
        EntropyKind::Shannon => match scenario {
            BoundScenario::CompositeSeparable => {
                check_mub_count(d_a, m)?;
                check_mub_count(d_b, m)?;
                let v = shannon_floor_formula(d_a, m) + shannon_floor_formula(d_b, m);
                Ok(BoundValue::analytic(v, "shannon-separable-sum"))
            }
            BoundScenario::CompositeAny => {
                if qubits && m == 2 {
                    // reached by separable states, so the all-state bound
                    // coincides with the separable one
                    Ok(BoundValue::analytic(
                        2.0 * 2.0_f64.ln(),
                        "shannon-two-qubit-any-pair",
                    ))
                } else if qubits && m == 3 {
                    Ok(BoundValue::conjectured(
                        3.0 * 2.0_f64.ln(),
                        "shannon-two-qubit-any-triple",
                        None,
                    ))
                } else {
                    Err(BoundError::UnsupportedCombination(format!(
                        "Shannon all-state composite bound known only for two qubits, m in {{2,3}}; got dims ({d_a},{d_b}), m={m}"
                    )))
                }
            }
            BoundScenario::Single => unreachable!(),
        },
        EntropyKind::Tsallis { q } => {
            if (q - 1.0).abs() < PARAM_ONE_TOL {
                return bound_composite(d_a, d_b, m, EntropyKind::Shannon, scenario);
            }
            if !qubits {
                return Err(BoundError::UnsupportedCombination(format!(
                    "Tsallis composite bounds catalogued only for two qubits; got dims ({d_a},{d_b})"
                )));
            }
            match (m, scenario) {
                (2, _) => {
                    let v = q_log(4.0, q).expect("argument > 0");
                    Ok(BoundValue::conjectured(v, "tsallis-composite-pair", None))
                }
                (3, BoundScenario::CompositeAny) => {
                    if q < 1.0 {
                        return Err(BoundError::UnsupportedCombination(
                            "two-qubit triple Tsallis bound catalogued for q ≥ 1 only".into(),
                        ));
                    }
                    let v = if q <= 2.0 {
                        3.0 * q_log(2.0, q).expect("argument > 0")
                    } else {
                        2.0 * q_log(4.0, q).expect("argument > 0")
                    };
                    Ok(BoundValue::conjectured(
                        v,
                        "tsallis-composite-triple-any",
                        None,
                    ))
                }
                (3, BoundScenario::CompositeSeparable) => {
                    if q < 1.0 {
                        return Err(BoundError::UnsupportedCombination(
                            "two-qubit triple Tsallis bound catalogued for q ≥ 1 only".into(),
                        ));
                    }
                    let v = 2.0 * q_log(4.0, q).expect("argument > 0");
                    Ok(BoundValue::conjectured(
                        v,
                        "tsallis-composite-triple-separable",
                        None,
                    ))
                }
                _ => Err(BoundError::UnsupportedCombination(format!(
                    "two-qubit Tsallis composite bound catalogued for m in {{2,3}}, got m={m}"
                ))),
            }
        }
        EntropyKind::Renyi { .. } => Err(BoundError::UnsupportedCombination(
            "no composite Rényi bounds in the catalog".into(),
        )),
    }
}

/// Pure state found by the minimizer; composite-separable searches optimize
/// a product |a⟩⊗|b⟩.
#[derive(Clone, Debug)]
pub enum MinimizerWitness {
    Single(Vec<Complex64>),
    Product(Vec<Complex64>, Vec<Complex64>),
}

#[derive(Clone, Debug)]
pub struct NumericBound {
    pub bound: BoundValue,
    pub witness: MinimizerWitness,
}

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_BUDGET: usize = 60_000;
const STEP_FLOOR: f64 = 1e-6;

fn compass_search(
    f: &(impl Fn(&[f64]) -> f64 + Sync),
    x: &mut [f64],
    budget: usize,
) -> (f64, usize, bool) {
    crate::optim::compass_search(f, x, budget, STEP_FLOOR)
}

/// Certify a bound by minimizing Σ_m S(outcome distribution of basis m) over
/// pure states with multi-start compass search. `sets` holds one measurement
/// set for a single system or two (one per party) for composite scenarios;
/// `budget` caps objective evaluations per restart.
pub fn verify_bound_numeric(
    sets: &[&MeasurementSet],
    kind: EntropyKind,
    scenario: BoundScenario,
    budget: usize,
    seed: RngSeed,
) -> Result<NumericBound, BoundError> {
    verify_bound_numeric_with(sets, kind, scenario, DEFAULT_RESTARTS, budget, seed)
}

pub fn verify_bound_numeric_with(
    sets: &[&MeasurementSet],
    kind: EntropyKind,
    scenario: BoundScenario,
    restarts: usize,
    budget: usize,
    seed: RngSeed,
) -> Result<NumericBound, BoundError> {
    match scenario {
        BoundScenario::Single => {
            if sets.len() != 1 {
                return Err(BoundError::InvalidInput(
                    "single-system scenario takes exactly one measurement set".into(),
                ));
            }
            if sets[0].dim() > 9 {
                return Err(BoundError::InvalidInput(
                    "single-system dimension limit is 9".into(),
                ));
            }
            minimize_single(sets[0], kind, restarts, budget, seed)
        }
        BoundScenario::CompositeAny | BoundScenario::CompositeSeparable => {
            if sets.len() != 2 {
                return Err(BoundError::InvalidInput(
                    "composite scenarios take one measurement set per party".into(),
                ));
            }
            if sets[0].len() != sets[1].len() {
                return Err(BoundError::InvalidInput(
                    "both parties need the same number of settings".into(),
                ));
            }
            if sets[0].dim() > 4 || sets[1].dim() > 4 {
                return Err(BoundError::InvalidInput(
                    "composite party dimension limit is 4".into(),
                ));
            }
            if scenario == BoundScenario::CompositeAny {
                minimize_composite_any(sets[0], sets[1], kind, restarts, budget, seed)
            } else {
                minimize_separable(sets[0], sets[1], kind, restarts, budget, seed)
            }
        }
    }
}

fn decode_state(x: &[f64]) -> Vec<Complex64> {
    let d = x.len() / 2;
    let mut v: Vec<Complex64> = (0..d)
        .map(|i| Complex64::new(x[2 * i], x[2 * i + 1]))
        .collect();
    let n = vec_norm(&v);
    for z in v.iter_mut() {
        *z /= n;
    }
    v
}

fn outcome_probs(adjoint_basis: &ComplexMatrix, psi: &[Complex64]) -> Vec<f64> {
    adjoint_basis
        .matvec(psi)
        .iter()
        .map(|z| z.norm_sqr())
        .collect()
}

fn entropy_sum(adjoints: &[ComplexMatrix], psi: &[Complex64], kind: EntropyKind) -> f64 {
    adjoints
        .iter()
        .map(|b| entropy_raw(&outcome_probs(b, psi), kind))
        .sum()
}

struct RestartOutcome {
    value: f64,
    evaluations: usize,
    converged: bool,
    x: Vec<f64>,
}

fn random_start(dim: usize, seed: RngSeed) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..2 * dim)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect()
}

fn run_restarts(
    objective: impl Fn(&[f64]) -> f64 + Sync,
    dim: usize,
    restarts: usize,
    budget: usize,
    seed: RngSeed,
) -> Vec<RestartOutcome> {
    (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut x = random_start(dim, seed.child(k as u64));
            let (value, evaluations, converged) = compass_search(&objective, &mut x, budget);
            RestartOutcome {
                value,
                evaluations,
                converged,
                x,
            }
        })
        .collect()
}

fn summarize(
    outcomes: Vec<RestartOutcome>,
    witness_of: impl Fn(&RestartOutcome) -> MinimizerWitness,
) -> Result<NumericBound, BoundError> {
    let restarts = outcomes.len();
    let evaluations: usize = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.value.partial_cmp(&b.value).unwrap().then(ia.cmp(ib)))
        .map(|(_, o)| o)
        .expect("at least one restart");
    if !outcomes.iter().any(|o| o.converged) {
        return Err(BoundError::BudgetExceeded { best: best.value });
    }
    Ok(NumericBound {
        bound: BoundValue {
            value: best.value,
            provenance: Provenance::Numerical {
                restarts,
                evaluations,
                converged: true,
            },
        },
        witness: witness_of(best),
    })
}

fn minimize_single(
    set: &MeasurementSet,
    kind: EntropyKind,
    restarts: usize,
    budget: usize,
    seed: RngSeed,
) -> Result<NumericBound, BoundError> {
    let adjoints: Vec<ComplexMatrix> = set.bases().iter().map(|b| b.matrix().adjoint()).collect();
    let objective = |x: &[f64]| entropy_sum(&adjoints, &decode_state(x), kind);
    let outcomes = run_restarts(objective, set.dim(), restarts, budget, seed);
    summarize(outcomes, |o| MinimizerWitness::Single(decode_state(&o.x)))
}

fn minimize_composite_any(
    set_a: &MeasurementSet,
    set_b: &MeasurementSet,
    kind: EntropyKind,
    restarts: usize,
    budget: usize,
    seed: RngSeed,
) -> Result<NumericBound, BoundError> {
    let adjoints: Vec<ComplexMatrix> = set_a
        .bases()
        .iter()
        .zip(set_b.bases())
        .map(|(a, b)| kron(a.matrix(), b.matrix()).adjoint())
        .collect();
    let dim = set_a.dim() * set_b.dim();
    let objective = |x: &[f64]| entropy_sum(&adjoints, &decode_state(x), kind);
    let outcomes = run_restarts(objective, dim, restarts, budget, seed);
    summarize(outcomes, |o| MinimizerWitness::Single(decode_state(&o.x)))
}

fn minimize_separable(
    set_a: &MeasurementSet,
    set_b: &MeasurementSet,
    kind: EntropyKind,
    restarts: usize,
    budget: usize,
    seed: RngSeed,
) -> Result<NumericBound, BoundError> {
    let adj_a: Vec<ComplexMatrix> = set_a.bases().iter().map(|b| b.matrix().adjoint()).collect();
    let adj_b: Vec<ComplexMatrix> = set_b.bases().iter().map(|b| b.matrix().adjoint()).collect();
    let (da, db) = (set_a.dim(), set_b.dim());
    let product_value = |pa: &[Complex64], pb: &[Complex64]| -> f64 {
        adj_a
            .iter()
            .zip(&adj_b)
            .map(|(ba, bb)| {
                let qa = outcome_probs(ba, pa);
                let qb = outcome_probs(bb, pb);
                let mut joint = Vec::with_capacity(qa.len() * qb.len());
                for &x in &qa {
                    for &y in &qb {
                        joint.push(x * y);
                    }
                }
                entropy_raw(&joint, kind)
            })
            .sum()
    };
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let child = seed.child(k as u64);
            let mut xa = random_start(da, child.child(0));
            let mut xb = random_start(db, child.child(1));
            let mut evaluations = 0usize;
            let mut value = f64::INFINITY;
            let mut converged = false;
            // alternate compass passes over the two local vectors
            for _ in 0..12 {
                let fb = decode_state(&xb);
                let fa_obj = |x: &[f64]| product_value(&decode_state(x), &fb);
                let (va, ea, ca) = compass_search(&fa_obj, &mut xa, budget / 8);
                let fa = decode_state(&xa);
                let fb_obj = |x: &[f64]| product_value(&fa, &decode_state(x));
                let (vb, eb, cb) = compass_search(&fb_obj, &mut xb, budget / 8);
                evaluations += ea + eb;
                let improved = vb < value - 1e-12;
                value = vb.min(va.min(value));
                converged = ca && cb;
                if !improved && converged {
                    break;
                }
                if evaluations > budget {
                    converged = false;
                    break;
                }
            }
            let mut x = xa.clone();
            x.extend_from_slice(&xb);
            RestartOutcome {
                value,
                evaluations,
                converged,
                x,
            }
        })
        .collect();
    summarize(outcomes, |o| {
        let (xa, xb) = o.x.split_at(2 * da);
        MinimizerWitness::Product(decode_state(xa), decode_state(xb))
    })
}
