//! Shannon, Tsallis and Rényi entropies and relative entropies over discrete
//! probability distributions.
//!
//! All values are in nats. The deformed logarithm is
//! ln_q(x) = (x^{1−q} − 1)/(1−q), recovering ln x as q → 1; entropies use the
//! conventions 0·ln 0 = 0 and 0^q = 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameters within this distance of 1 are routed to the Shannon branch:
/// the q → 1 limit is analytic and the generic formula cancels catastrophically.
pub const PARAM_ONE_TOL: f64 = 1e-9;
/// Normalization slack accepted on construction (renormalized inside).
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Entries below zero by at most this amount are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum EntropyError {
    #[error("q-logarithm domain error: x = {x} is not positive")]
    DomainError { x: f64 },
    #[error("relative entropy is infinite: q[{index}] = 0 but p[{index}] = {p}")]
    InfiniteDivergence { index: usize, p: f64 },
    #[error("marginal mismatch at index {index}: joint row sum {row_sum} vs marginal {marginal}")]
    MarginalMismatch {
        index: usize,
        row_sum: f64,
        marginal: f64,
    },
    #[error("invalid entropy parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}

/// Discrete probability distribution: non-negative entries summing to one.
///
/// Construction clamps entries in [−1e-12, 0) to zero and renormalizes when
/// the total is within 1e-9 of one; anything worse is rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(mut probs: Vec<f64>) -> Result<Self, EntropyError> {
        if probs.is_empty() {
            return Err(EntropyError::InvalidDistribution(
                "empty distribution".into(),
            ));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(EntropyError::InvalidDistribution(format!(
                    "non-finite entry at {i}"
                )));
            }
            if *p < 0.0 {
                if *p < -NEGATIVE_CLAMP {
                    return Err(EntropyError::InvalidDistribution(format!(
                        "negative entry {p} at index {i}"
                    )));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(EntropyError::InvalidDistribution(format!(
                "sum {sum} differs from 1 beyond tolerance"
            )));
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        Ok(ProbDist { probs })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        ProbDist {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on outcome `k`.
    pub fn delta(n: usize, k: usize) -> Self {
        assert!(k < n);
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        ProbDist { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Product distribution p ⊗ r with index i·len(r)+j.
    pub fn product(&self, other: &ProbDist) -> ProbDist {
        let mut probs = Vec::with_capacity(self.len() * other.len());
        for &a in &self.probs {
            for &b in &other.probs {
                probs.push(a * b);
            }
        }
        ProbDist { probs }
    }

    /// Mixture λp + (1−λ)r of equal-length distributions.
    pub fn mix(&self, other: &ProbDist, lambda: f64) -> ProbDist {
        assert_eq!(self.len(), other.len());
        assert!((0.0..=1.0).contains(&lambda));
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        ProbDist { probs }
    }
}

/// Choice of entropy functional with its parameter.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EntropyKind {
    Shannon,
    Tsallis { q: f64 },
    Renyi { r: f64 },
}

impl EntropyKind {
    pub fn tsallis(q: f64) -> Result<Self, EntropyError> {
        if !(q > 0.0) || q == 1.0 {
            return Err(EntropyError::InvalidParameter(format!(
                "Tsallis parameter must satisfy q > 0, q ≠ 1; got {q}"
            )));
        }
        Ok(EntropyKind::Tsallis { q })
    }

    pub fn renyi(r: f64) -> Result<Self, EntropyError> {
        if !(r > 0.0) || r == 1.0 {
            return Err(EntropyError::InvalidParameter(format!(
                "Rényi parameter must satisfy r > 0, r ≠ 1; got {r}"
            )));
        }
        Ok(EntropyKind::Renyi { r })
    }
}

/// Deformed logarithm ln_q(x) = (x^{1−q} − 1)/(1−q); natural log within
/// 1e-9 of q = 1.
pub fn q_log(x: f64, q: f64) -> Result<f64, EntropyError> {
    if !(x > 0.0) {
        return Err(EntropyError::DomainError { x });
    }
    if (q - 1.0).abs() < PARAM_ONE_TOL {
        Ok(x.ln())
    } else {
        Ok((x.powf(1.0 - q) - 1.0) / (1.0 - q))
    }
}

pub(crate) fn shannon_raw(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

pub(crate) fn tsallis_raw(probs: &[f64], q: f64) -> f64 {
    if (q - 1.0).abs() < PARAM_ONE_TOL {
        return shannon_raw(probs);
    }
    let power_sum: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(q)).sum();
    (1.0 - power_sum) / (q - 1.0)
}

pub(crate) fn renyi_raw(probs: &[f64], r: f64) -> f64 {
    if (r - 1.0).abs() < PARAM_ONE_TOL {
        return shannon_raw(probs);
    }
    // factor out the largest probability so p^r never underflows for large r
    let pmax = probs.iter().cloned().fold(0.0_f64, f64::max);
    if pmax <= 0.0 {
        return 0.0;
    }
    let scaled: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| (p / pmax).powf(r))
        .sum();
    (r * pmax.ln() + scaled.ln()) / (1.0 - r)
}

pub(crate) fn entropy_raw(probs: &[f64], kind: EntropyKind) -> f64 {
    match kind {
        EntropyKind::Shannon => shannon_raw(probs),
        EntropyKind::Tsallis { q } => tsallis_raw(probs, q),
        EntropyKind::Renyi { r } => renyi_raw(probs, r),
    }
}

/// S(𝒫), S_q(𝒫) or S̃_r(𝒫) of a distribution.
pub fn entropy(p: &ProbDist, kind: EntropyKind) -> f64 {
    entropy_raw(p.probs(), kind)
}

/// Relative entropy (divergence) of `p` from `q_dist`.
///
/// Shannon gives the Kullback-Leibler divergence Σ pᵢ ln(pᵢ/qᵢ); Tsallis
/// gives −Σ pᵢ ln_q(qᵢ/pᵢ); Rényi gives ln(Σ pᵢ^r qᵢ^{1−r})/(r−1). Support
/// violations (qᵢ = 0 with pᵢ > 0) are signalled as a tagged error rather
/// than a floating-point infinity.
pub fn relative_entropy(
    p: &ProbDist,
    q_dist: &ProbDist,
    kind: EntropyKind,
) -> Result<f64, EntropyError> {
    if p.len() != q_dist.len() {
        return Err(EntropyError::InvalidDistribution(format!(
            "length mismatch {} vs {}",
            p.len(),
            q_dist.len()
        )));
    }
    for (i, (&pi, &qi)) in p.probs().iter().zip(q_dist.probs()).enumerate() {
        if qi == 0.0 && pi > 0.0 {
            return Err(EntropyError::InfiniteDivergence { index: i, p: pi });
        }
    }
    let pairs = || {
        p.probs()
            .iter()
            .zip(q_dist.probs())
            .filter(|(&pi, _)| pi > 0.0)
    };
    let value = match kind {
        EntropyKind::Shannon => pairs().map(|(&pi, &qi)| pi * (pi / qi).ln()).sum(),
        EntropyKind::Tsallis { q } => {
            if (q - 1.0).abs() < PARAM_ONE_TOL {
                pairs().map(|(&pi, &qi)| pi * (pi / qi).ln()).sum()
            } else {
                pairs()
                    .map(|(&pi, &qi)| pi * (1.0 - (qi / pi).powf(1.0 - q)) / (1.0 - q))
                    .sum()
            }
        }
        EntropyKind::Renyi { r } => {
            if (r - 1.0).abs() < PARAM_ONE_TOL {
                pairs().map(|(&pi, &qi)| pi * (pi / qi).ln()).sum()
            } else {
                // log-sum-exp over ℓᵢ = r ln pᵢ + (1−r) ln qᵢ
                let logs: Vec<f64> = pairs()
                    .map(|(&pi, &qi)| r * pi.ln() + (1.0 - r) * qi.ln())
                    .collect();
                let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
                (m + s.ln()) / (r - 1.0)
            }
        }
    };
    Ok(value)
}

/// Conditional Tsallis entropy S_q(B|A) = S_q(A,B) − S_q(A) of a joint
/// distribution laid out row-major with the conditioning variable first.
/// Reduces to the Shannon conditional entropy as q → 1.
pub fn conditional_tsallis(
    joint: &ProbDist,
    marginal: &ProbDist,
    q: f64,
) -> Result<f64, EntropyError> {
    let rows = marginal.len();
    if rows == 0 || joint.len() % rows != 0 {
        return Err(EntropyError::MarginalMismatch {
            index: 0,
            row_sum: f64::NAN,
            marginal: rows as f64,
        });
    }
    let cols = joint.len() / rows;
    for i in 0..rows {
        let row_sum: f64 = joint.probs()[i * cols..(i + 1) * cols].iter().sum();
        if (row_sum - marginal.probs()[i]).abs() > NORMALIZATION_TOL {
            return Err(EntropyError::MarginalMismatch {
                index: i,
                row_sum,
                marginal: marginal.probs()[i],
            });
        }
    }
    Ok(tsallis_raw(joint.probs(), q) - tsallis_raw(marginal.probs(), q))
}
