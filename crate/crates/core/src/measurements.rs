//! Generators for the measurement bases used by the steering criteria:
//! Pauli eigenbases, Fourier MUB pairs, complete MUB sets in prime dimension,
//! the explicit dimension-4 MUB set, the rotated qutrit pair tied to the
//! bound-entangled family, and unitary rotation of whole sets.

use crate::linalg::{kron, ComplexMatrix, C_ONE, C_ZERO};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use thiserror::Error;

/// Tolerance for orthonormality of generated bases.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Tolerance on |⟨v|w⟩|² − 1/d when flagging pairwise unbiasedness.
pub const UNBIASEDNESS_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MeasurementError {
    #[error("basis is not orthonormal (max defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
    #[error("dimension {0} is not prime")]
    NotPrime(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("measurement set must be non-empty")]
    EmptySet,
    #[error("invalid data: {0}")]
    InvalidData(String),
}

/// Orthonormal measurement basis; the columns of `matrix` are the basis
/// vectors. Vectors are stored with their first nonzero component real and
/// positive so serialized fixtures are canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    dim: usize,
    matrix: ComplexMatrix,
}

impl MeasurementBasis {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, MeasurementError> {
        if !matrix.is_square() {
            return Err(MeasurementError::DimensionMismatch(format!(
                "basis matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.unitarity_defect();
        if defect > ORTHONORMALITY_TOL {
            return Err(MeasurementError::NotOrthonormal { defect });
        }
        let dim = matrix.rows();
        Ok(MeasurementBasis {
            dim,
            matrix: gauge_fix(matrix),
        })
    }

    pub fn from_vectors(vectors: Vec<Vec<Complex64>>) -> Result<Self, MeasurementError> {
        let dim = vectors.len();
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(MeasurementError::DimensionMismatch(
                "vector length differs from basis size".into(),
            ));
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis vectors as matrix columns.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.matrix.column(j)
    }

    pub fn conjugate(&self) -> MeasurementBasis {
        MeasurementBasis {
            dim: self.dim,
            matrix: gauge_fix(self.matrix.conj()),
        }
    }

    pub fn rotated(&self, u: &ComplexMatrix) -> Result<MeasurementBasis, MeasurementError> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return Err(MeasurementError::DimensionMismatch(format!(
                "unitary is {}x{}, basis dim {}",
                u.rows(),
                u.cols(),
                self.dim
            )));
        }
        if !u.is_unitary(ORTHONORMALITY_TOL) {
            return Err(MeasurementError::NotUnitary {
                defect: u.unitarity_defect(),
            });
        }
        MeasurementBasis::new(u.mul(&self.matrix))
    }
}

fn gauge_fix(mut m: ComplexMatrix) -> ComplexMatrix {
    for j in 0..m.cols() {
        let col = m.column(j);
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-12) {
            let phase = lead / lead.norm();
            let fixed: Vec<Complex64> = col.iter().map(|z| z * phase.conj()).collect();
            m.set_column(j, &fixed);
        }
    }
    m
}

/// A family of bases for one party, all of the same dimension. The
/// `unbiased` flag records whether every cross pair satisfies
/// |⟨v|w⟩|² = 1/d.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet {
    bases: Vec<MeasurementBasis>,
    unbiased: bool,
}

impl MeasurementSet {
    pub fn new(bases: Vec<MeasurementBasis>) -> Result<Self, MeasurementError> {
        if bases.is_empty() {
            return Err(MeasurementError::EmptySet);
        }
        let dim = bases[0].dim();
        if bases.iter().any(|b| b.dim() != dim) {
            return Err(MeasurementError::DimensionMismatch(
                "bases in a set must share one dimension".into(),
            ));
        }
        let unbiased = all_pairs_unbiased(&bases);
        Ok(MeasurementSet { bases, unbiased })
    }

    pub fn bases(&self) -> &[MeasurementBasis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.bases[0].dim()
    }

    pub fn is_unbiased(&self) -> bool {
        self.unbiased
    }

    pub fn conjugate(&self) -> MeasurementSet {
        let bases = self.bases.iter().map(|b| b.conjugate()).collect();
        MeasurementSet::new(bases).expect("conjugation preserves orthonormality")
    }

    /// Restrict to the first `m` bases.
    pub fn take(&self, m: usize) -> Result<MeasurementSet, MeasurementError> {
        if m == 0 || m > self.bases.len() {
            return Err(MeasurementError::InvalidData(format!(
                "cannot take {m} bases from a set of {}",
                self.bases.len()
            )));
        }
        MeasurementSet::new(self.bases[..m].to_vec())
    }
}

fn all_pairs_unbiased(bases: &[MeasurementBasis]) -> bool {
    if bases.len() < 2 {
        return false;
    }
    let d = bases[0].dim();
    let target = 1.0 / d as f64;
    for a in 0..bases.len() {
        for b in (a + 1)..bases.len() {
            let overlap = bases[a].matrix().adjoint().mul(bases[b].matrix());
            for i in 0..d {
                for j in 0..d {
                    if (overlap.get(i, j).norm_sqr() - target).abs() > UNBIASEDNESS_TOL {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Rotate each basis of the set: one shared unitary or one per basis.
pub fn rotate(
    set: &MeasurementSet,
    unitaries: &[ComplexMatrix],
) -> Result<MeasurementSet, MeasurementError> {
    let rotated: Vec<MeasurementBasis> = if unitaries.len() == 1 {
        set.bases()
            .iter()
            .map(|b| b.rotated(&unitaries[0]))
            .collect::<Result<_, _>>()?
    } else if unitaries.len() == set.len() {
        set.bases()
            .iter()
            .zip(unitaries)
            .map(|(b, u)| b.rotated(u))
            .collect::<Result<_, _>>()?
    } else {
        return Err(MeasurementError::DimensionMismatch(format!(
            "need 1 or {} unitaries, got {}",
            set.len(),
            unitaries.len()
        )));
    };
    MeasurementSet::new(rotated)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Eigenbasis of one Pauli operator, +1 eigenvector first.
pub fn pauli_basis(axis: PauliAxis) -> MeasurementBasis {
    let h = FRAC_1_SQRT_2;
    let vectors = match axis {
        PauliAxis::X => vec![
            vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        ],
        PauliAxis::Y => vec![
            vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)],
            vec![Complex64::new(h, 0.0), Complex64::new(0.0, -h)],
        ],
        PauliAxis::Z => vec![vec![C_ONE, C_ZERO], vec![C_ZERO, C_ONE]],
    };
    MeasurementBasis::from_vectors(vectors).expect("Pauli eigenbases are orthonormal")
}

/// Eigenbases of the chosen Pauli operators.
pub fn pauli_set(axes: &[PauliAxis]) -> Result<MeasurementSet, MeasurementError> {
    if axes.is_empty() {
        return Err(MeasurementError::EmptySet);
    }
    MeasurementSet::new(axes.iter().map(|&a| pauli_basis(a)).collect())
}

/// The complete qubit MUB triple {σx, σy, σz}.
pub fn pauli_triple() -> MeasurementSet {
    pauli_set(&[PauliAxis::X, PauliAxis::Y, PauliAxis::Z]).expect("non-empty")
}

/// Computational basis plus the discrete-Fourier basis
/// F(j,k) = e^{2πi jk/d}/√d; mutually unbiased in every dimension.
pub fn mub_fourier_pair(d: usize) -> Result<MeasurementSet, MeasurementError> {
    if d < 2 {
        return Err(MeasurementError::DimensionMismatch("need d ≥ 2".into()));
    }
    let comp = MeasurementBasis::new(ComplexMatrix::identity(d))?;
    let norm = 1.0 / (d as f64).sqrt();
    let fourier = ComplexMatrix::from_fn(d, d, |j, k| {
        Complex64::from_polar(norm, 2.0 * PI * (j * k) as f64 / d as f64)
    });
    MeasurementSet::new(vec![comp, MeasurementBasis::new(fourier)?])
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Complete set of d+1 mutually unbiased bases for prime d.
///
/// For odd primes this is the Weyl-Heisenberg construction: basis t has
/// vectors with components e^{2πi(t·j² + s·j)/d}/√d together with the
/// computational basis. For d = 2 the quadratic phases degenerate
/// (j² ≡ j mod 2), so the Pauli triple is returned instead; it is the
/// complete qubit MUB set up to global phases.
pub fn mub_complete(d: usize) -> Result<MeasurementSet, MeasurementError> {
    if !is_prime(d) {
        return Err(MeasurementError::NotPrime(d));
    }
    if d == 2 {
        return Ok(pauli_triple());
    }
    let mut bases = vec![MeasurementBasis::new(ComplexMatrix::identity(d))?];
    let norm = 1.0 / (d as f64).sqrt();
    for t in 0..d {
        let m = ComplexMatrix::from_fn(d, d, |j, s| {
            let num = (t * j * j + s * j) % d;
            Complex64::from_polar(norm, 2.0 * PI * num as f64 / d as f64)
        });
        bases.push(MeasurementBasis::new(m)?);
    }
    MeasurementSet::new(bases)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The explicit five-basis MUB set in dimension 4 (columns as vectors).
pub fn mub_dim4() -> MeasurementSet {
    let h = 0.5;
    let m1 = ComplexMatrix::identity(4);
    let m2 = ComplexMatrix::from_rows(vec![
        vec![c(h, 0.), c(h, 0.), c(h, 0.), c(h, 0.)],
        vec![c(h, 0.), c(h, 0.), c(-h, 0.), c(-h, 0.)],
        vec![c(h, 0.), c(-h, 0.), c(-h, 0.), c(h, 0.)],
        vec![c(h, 0.), c(-h, 0.), c(h, 0.), c(-h, 0.)],
    ])
    .unwrap();
    let m3 = ComplexMatrix::from_rows(vec![
        vec![c(h, 0.), c(h, 0.), c(h, 0.), c(h, 0.)],
        vec![c(-h, 0.), c(-h, 0.), c(h, 0.), c(h, 0.)],
        vec![c(0., -h), c(0., h), c(0., h), c(0., -h)],
        vec![c(0., -h), c(0., h), c(0., -h), c(0., h)],
    ])
    .unwrap();
    let m4 = ComplexMatrix::from_rows(vec![
        vec![c(h, 0.), c(h, 0.), c(h, 0.), c(h, 0.)],
        vec![c(0., -h), c(0., -h), c(0., h), c(0., h)],
        vec![c(0., -h), c(0., h), c(0., h), c(0., -h)],
        vec![c(-h, 0.), c(h, 0.), c(-h, 0.), c(h, 0.)],
    ])
    .unwrap();
    let m5 = ComplexMatrix::from_rows(vec![
        vec![c(h, 0.), c(h, 0.), c(h, 0.), c(h, 0.)],
        vec![c(0., -h), c(0., -h), c(0., h), c(0., h)],
        vec![c(-h, 0.), c(h, 0.), c(-h, 0.), c(h, 0.)],
        vec![c(0., -h), c(0., h), c(0., h), c(0., -h)],
    ])
    .unwrap();
    let bases = [m1, m2, m3, m4, m5]
        .into_iter()
        .map(|m| MeasurementBasis::new(m).expect("printed bases are orthonormal"))
        .collect();
    MeasurementSet::new(bases).expect("non-empty")
}

/// The rotated qutrit MUB pair matched to the symmetry of the
/// bound-entangled family.
///
/// The first basis is completed with a third component of 0 on its last
/// vector (the unique normalized completion consistent with orthonormality).
/// The free unimodular phase on the second basis is fixed to 1: every
/// unimodular choice yields the same orthonormality and unbiasedness, so the
/// simplest representative is taken.
pub fn bes_measurements() -> MeasurementSet {
    let s3 = 1.0 / 3.0_f64.sqrt();
    let s6 = 1.0 / 6.0_f64.sqrt();
    let s2 = FRAC_1_SQRT_2;
    let b1 = MeasurementBasis::from_vectors(vec![
        vec![c(s3, 0.), c(-s6, 0.), c(-s2, 0.)],
        vec![c(s3, 0.), c(-s6, 0.), c(s2, 0.)],
        vec![c(s3, 0.), c((2.0_f64 / 3.0).sqrt(), 0.), C_ZERO],
    ])
    .expect("orthonormal");
    let b2 = MeasurementBasis::from_vectors(vec![
        vec![C_ONE, C_ZERO, C_ZERO],
        vec![C_ZERO, c(s2, 0.), c(0., s2)],
        vec![C_ZERO, c(s2, 0.), c(0., -s2)],
    ])
    .expect("orthonormal");
    MeasurementSet::new(vec![b1, b2]).expect("non-empty")
}

/// Projective observable: an eigenbasis with one real eigenvalue per vector.
#[derive(Clone, Debug)]
pub struct Observable {
    pub basis: MeasurementBasis,
    pub eigenvalues: Vec<f64>,
}

impl Observable {
    pub fn new(basis: MeasurementBasis, eigenvalues: Vec<f64>) -> Result<Self, MeasurementError> {
        if eigenvalues.len() != basis.dim() {
            return Err(MeasurementError::DimensionMismatch(
                "one eigenvalue per basis vector required".into(),
            ));
        }
        Ok(Observable { basis, eigenvalues })
    }
}

/// Pauli operator as an observable with eigenvalues (+1, −1).
pub fn pauli_observable(axis: PauliAxis) -> Observable {
    Observable {
        basis: pauli_basis(axis),
        eigenvalues: vec![1.0, -1.0],
    }
}

/// Kronecker product of two bases: columns vᵢ ⊗ w_j indexed i·d_b + j.
pub fn product_basis(a: &MeasurementBasis, b: &MeasurementBasis) -> MeasurementBasis {
    MeasurementBasis::new(kron(a.matrix(), b.matrix())).expect("product of orthonormal bases")
}

/// JSON exchange form of a measurement set, mirroring the density-matrix
/// format per basis.
#[derive(Serialize, Deserialize)]
pub struct MeasurementSetJson {
    pub bases: Vec<crate::linalg::MatrixJson>,
}

impl MeasurementSetJson {
    pub fn from_set(set: &MeasurementSet) -> Self {
        MeasurementSetJson {
            bases: set
                .bases()
                .iter()
                .map(|b| crate::linalg::MatrixJson::from_matrix(b.matrix()))
                .collect(),
        }
    }

    pub fn to_set(&self) -> Result<MeasurementSet, MeasurementError> {
        let bases = self
            .bases
            .iter()
            .map(|dto| {
                let m = dto
                    .to_matrix()
                    .map_err(|e| MeasurementError::InvalidData(e.to_string()))?;
                MeasurementBasis::new(m)
            })
            .collect::<Result<Vec<_>, _>>()?;
        MeasurementSet::new(bases)
    }
}

pub fn set_to_json(set: &MeasurementSet) -> String {
    serde_json::to_string_pretty(&MeasurementSetJson::from_set(set)).expect("serializable")
}

pub fn set_from_json(s: &str) -> Result<MeasurementSet, MeasurementError> {
    let dto: MeasurementSetJson =
        serde_json::from_str(s).map_err(|e| MeasurementError::InvalidData(e.to_string()))?;
    dto.to_set()
}
