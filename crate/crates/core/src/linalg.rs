//! Dense complex linear algebra for small Hilbert spaces (d ≤ 16).
//!
//! Provides the matrix type underlying states and measurement operators,
//! Kronecker products, Hermitian eigenvalues (cyclic Jacobi), density-matrix
//! validation, and seeded random unitaries / random density matrices.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const C_ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const C_ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Tolerance for Hermiticity checks on density matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance for |tr ρ − 1| on density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalue floor for positivity checks. Strict zero would reject
/// legitimate states after chains of unitary conjugations.
pub const EIGENVALUE_FLOOR: f64 = -1e-9;
/// Tolerance for ‖U†U − I‖_max on unitaries.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |M - M†| = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("trace differs from one by {defect:.3e}")]
    TraceNotOne { defect: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (max |U†U - I| = {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("invalid matrix data: {0}")]
    InvalidData(String),
}

/// Dense complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C_ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::InvalidData("ragged row lengths".into()));
        }
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::InvalidData("non-finite entry".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// Rank-one projector |v⟩⟨v|.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows, "column length mismatch");
        for (i, &x) in v.iter().enumerate() {
            self.set(i, j, x);
        }
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// M |v⟩ for a column vector.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale_re(&self, s: f64) -> ComplexMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Conjugate transpose M†.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> ComplexMatrix {
        let data = self.data.iter().map(|z| z.conj()).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// (M + M†)/2.
    pub fn hermitized(&self) -> ComplexMatrix {
        assert!(self.is_square());
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        d
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.adjoint().mul(self);
        prod.max_abs_diff(&ComplexMatrix::identity(self.cols))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_defect() <= tol
    }
}

/// Kronecker product a ⊗ b with index layout (i·rb+k, j·cb+l) = a(i,j)·b(k,l).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            if aij == C_ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// ⟨a|b⟩ = Σᵢ aᵢ* bᵢ.
pub fn vec_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = vec_norm(v);
    assert!(n > 0.0, "cannot normalize zero vector");
    v.iter().map(|z| z / n).collect()
}

/// |a⟩ ⊗ |b⟩ with index i·len(b)+j.
pub fn vec_kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Computational basis ket |i⟩ in dimension d.
pub fn basis_ket(d: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; d];
    v[i] = C_ONE;
    v
}

const MAX_JACOBI_SWEEPS: usize = 60;

/// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi rotations.
///
/// The input is symmetrized as (M + M†)/2 before iteration, so callers may
/// pass matrices that are Hermitian only up to round-off.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.hermitized();
    let scale = a.frobenius_norm().max(1e-300);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let abs = apq.norm();
                if abs <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let phase = apq / abs; // e^{iφ}
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let emi = phase.conj();
                // A ← A·W with W = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] on columns (p,q)
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * emi * s);
                    a.set(k, q, akp * s + akq * emi * c);
                }
                // A ← W†·A on rows (p,q)
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * phase * s);
                    a.set(q, k, apk * s + aqk * phase * c);
                }
                a.set(p, q, C_ZERO);
                a.set(q, p, C_ZERO);
                let dp = a.get(p, p);
                a.set(p, p, Complex64::new(dp.re, 0.0));
                let dq = a.get(q, q);
                a.set(q, q, Complex64::new(dq.re, 0.0));
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix).expect("validated square matrix")[0]
    }

    /// Normalized projector onto a pure state.
    pub fn from_pure(ket: &[Complex64]) -> Self {
        let v = vec_normalized(ket);
        DensityMatrix {
            dim: v.len(),
            matrix: ComplexMatrix::outer(&v),
        }
    }

    /// U ρ U†. The caller is responsible for U being unitary; validity of the
    /// result is preserved exactly in that case.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<Self, LinalgError> {
        if !u.is_unitary(UNITARITY_TOL) {
            return Err(LinalgError::NotUnitary {
                defect: u.unitarity_defect(),
            });
        }
        if u.rows() != self.dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "unitary dim {} vs state dim {}",
                u.rows(),
                self.dim
            )));
        }
        let m = u.mul(&self.matrix).mul(&u.adjoint()).hermitized();
        Ok(DensityMatrix {
            dim: self.dim,
            matrix: m,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson::from_matrix(&self.matrix)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, LinalgError> {
        let dto: MatrixJson =
            serde_json::from_str(s).map_err(|e| LinalgError::InvalidData(e.to_string()))?;
        validate_density(&dto.to_matrix()?)
    }
}

/// Check the density-matrix invariants and wrap the matrix on success.
///
/// Failures report which invariant broke and by how much.
pub fn validate_density(m: &ComplexMatrix) -> Result<DensityMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(LinalgError::NotHermitian { defect });
    }
    let tr = m.trace();
    let tr_defect = (tr - C_ONE).norm();
    if tr_defect > TRACE_TOL {
        return Err(LinalgError::TraceNotOne { defect: tr_defect });
    }
    let eigs = hermitian_eigenvalues(m)?;
    if let Some(&min) = eigs.first() {
        if min < EIGENVALUE_FLOOR {
            return Err(LinalgError::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    Ok(DensityMatrix {
        dim: m.rows(),
        matrix: m.hermitized(),
    })
}

/// Seed for all randomness in the crate. The same seed yields bit-identical
/// sample streams; parallel callers derive per-shard seeds via [`RngSeed::child`]
/// or independent streams via [`RngSeed::stream_rng`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent generator for shard `stream` of this seed.
    pub fn stream_rng(self, stream: u64) -> ChaCha8Rng {
        let mut r = self.rng();
        r.set_stream(stream);
        r
    }

    /// Derived seed for shard `index`.
    pub fn child(self, index: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(1))))
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary via Gram-Schmidt orthonormalization of a complex
/// Gaussian matrix. The positive-diagonal R convention fixes the column
/// phases, which makes the resulting Q exactly Haar distributed.
pub fn random_unitary(d: usize, seed: RngSeed) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be at least 1");
    let mut rng = seed.rng();
    loop {
        if let Some(u) = try_orthonormalize(&gaussian_matrix(d, &mut rng)) {
            return u;
        }
    }
}

/// Orthonormalize with a freshly drawn generator state.
pub fn random_unitary_with(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        if let Some(u) = try_orthonormalize(&gaussian_matrix(d, rng)) {
            return u;
        }
    }
}

fn try_orthonormalize(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let d = g.rows();
    let mut q = g.clone();
    for j in 0..d {
        let mut col = q.column(j);
        // two-pass modified Gram-Schmidt
        for _ in 0..2 {
            for k in 0..j {
                let prev = q.column(k);
                let r = vec_inner(&prev, &col);
                for (c, p) in col.iter_mut().zip(&prev) {
                    *c -= r * p;
                }
            }
        }
        let n = vec_norm(&col);
        if n < 1e-8 {
            return None;
        }
        for c in col.iter_mut() {
            *c /= n;
        }
        q.set_column(j, &col);
    }
    Some(q)
}

/// Random density matrix from the Hilbert-Schmidt ensemble: ρ = GG†/tr(GG†)
/// with G a d×d complex Gaussian matrix.
pub fn random_density_hs(d: usize, seed: RngSeed) -> DensityMatrix {
    let mut rng = seed.rng();
    random_density_hs_with(d, &mut rng)
}

pub fn random_density_hs_with(d: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    assert!(d >= 2, "dimension must be at least 2");
    let g = gaussian_matrix(d, rng);
    let gg = g.mul(&g.adjoint());
    let tr = gg.trace().re;
    let m = gg.scale_re(1.0 / tr).hermitized();
    DensityMatrix { dim: d, matrix: m }
}

/// Angle parametrization of U(d) as a product of complex Givens rotations,
/// one per plane (i<j), followed by a layer of diagonal phases. Takes exactly
/// d² parameters: (θ, φ) per plane and one phase per row. Exposed primarily
/// for the d=3 measurement optimization, where a full angle chart of the
/// unitary group is required.
pub fn unitary_from_angles(d: usize, params: &[f64]) -> Result<ComplexMatrix, LinalgError> {
    if params.len() != d * d {
        return Err(LinalgError::DimensionMismatch(format!(
            "expected {} parameters for U({d}), got {}",
            d * d,
            params.len()
        )));
    }
    let mut u = ComplexMatrix::identity(d);
    let mut idx = 0;
    for i in 0..d {
        for j in (i + 1)..d {
            let theta = params[idx];
            let phi = params[idx + 1];
            idx += 2;
            u = u.mul(&givens(d, i, j, theta, phi));
        }
    }
    for k in 0..d {
        let phase = Complex64::from_polar(1.0, params[idx]);
        idx += 1;
        for col in 0..d {
            let v = u.get(k, col) * phase;
            u.set(k, col, v);
        }
    }
    Ok(u)
}

/// Three-angle, six-phase chart of U(3) used for qutrit basis optimization.
pub fn unitary_d3_from_angles(params: &[f64; 9]) -> ComplexMatrix {
    unitary_from_angles(3, params).expect("parameter count fixed by type")
}

fn givens(d: usize, i: usize, j: usize, theta: f64, phi: f64) -> ComplexMatrix {
    let mut g = ComplexMatrix::identity(d);
    let (s, c) = theta.sin_cos();
    g.set(i, i, Complex64::new(c, 0.0));
    g.set(j, j, Complex64::new(c, 0.0));
    g.set(i, j, Complex64::from_polar(s, -phi));
    g.set(j, i, -Complex64::from_polar(s, phi));
    g
}

/// Row-major JSON exchange format: `{"dim": d, "re": [[..]], "im": [[..]]}`.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.rows();
        let re = (0..d)
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).re).collect())
            .collect();
        let im = (0..d)
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).im).collect())
            .collect();
        MatrixJson { dim: d, re, im }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, LinalgError> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(LinalgError::InvalidData(
                "row count differs from dim".into(),
            ));
        }
        let mut rows = Vec::with_capacity(self.dim);
        for (re_row, im_row) in self.re.iter().zip(&self.im) {
            if re_row.len() != im_row.len() {
                return Err(LinalgError::InvalidData("re/im shape mismatch".into()));
            }
            rows.push(
                re_row
                    .iter()
                    .zip(im_row)
                    .map(|(&r, &i)| Complex64::new(r, i))
                    .collect(),
            );
        }
        ComplexMatrix::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![C_ZERO, C_ONE], vec![C_ONE, C_ZERO]]).unwrap()
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![C_ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), C_ZERO]])
            .unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, -1.0])
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let zz = kron(&pauli_z(), &pauli_z());
        assert_eq!(zz, ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_matches_index_formula() {
        // (a⊗b)[i·db+k, j·db+l] = a[i,j]·b[k,l] on all 16 entries of σx⊗σy
        let a = pauli_x();
        let b = pauli_y();
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for kk in 0..2 {
                    for l in 0..2 {
                        let expect = a.get(i, j) * b.get(kk, l);
                        assert!((k.get(2 * i + kk, 2 * j + l) - expect).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_associativity_and_trace() {
        let seed = RngSeed(7);
        let a = random_unitary(2, seed.child(0));
        let b = random_unitary(3, seed.child(1));
        let cm = random_unitary(2, seed.child(2));
        let lhs = kron(&kron(&a, &b), &cm);
        let rhs = kron(&a, &kron(&b, &cm));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let tr = kron(&a, &b).trace();
        assert!((tr - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn jacobi_recovers_known_spectra() {
        for m in [pauli_x(), pauli_y(), pauli_z()] {
            let e = hermitian_eigenvalues(&m).unwrap();
            assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
        }
        // spectrum of U diag(λ) U† must reproduce λ for random unitaries
        let seed = RngSeed(42);
        for (k, d) in [(0u64, 3usize), (1, 5), (2, 8), (3, 16)] {
            let u = random_unitary(d, seed.child(k));
            let lambda: Vec<f64> = (0..d).map(|i| (i as f64) - 2.5).collect();
            let m = u.mul(&ComplexMatrix::diag(&lambda)).mul(&u.adjoint());
            let eigs = hermitian_eigenvalues(&m).unwrap();
            for (got, want) in eigs.iter().zip(&lambda) {
                assert!((got - want).abs() < 1e-10, "d={d}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn validate_density_accepts_and_rejects() {
        let ok = ComplexMatrix::identity(4).scale_re(0.25);
        assert!(validate_density(&ok).is_ok());

        // singlet projector is rank one and valid
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![C_ZERO, c(inv, 0.0), c(-inv, 0.0), C_ZERO];
        let proj = ComplexMatrix::outer(&psi);
        let rho = validate_density(&proj).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);

        let bad = ComplexMatrix::diag(&[0.6, 0.6, -0.1, -0.1]);
        match validate_density(&bad) {
            Err(LinalgError::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.1).abs() < 1e-12)
            }
            other => panic!("expected NotPositive, got {other:?}"),
        }

        let off_trace = ComplexMatrix::identity(2);
        assert!(matches!(
            validate_density(&off_trace),
            Err(LinalgError::TraceNotOne { .. })
        ));

        let mut nh = ComplexMatrix::identity(2).scale_re(0.5);
        nh.set(0, 1, c(0.1, 0.0));
        assert!(matches!(
            validate_density(&nh),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        for d in 2..=6 {
            let u = random_unitary(d, RngSeed(11));
            assert!(u.unitarity_defect() < 1e-10, "d={d}");
        }
        let a = random_unitary(2, RngSeed(5));
        let b = random_unitary(2, RngSeed(5));
        assert_eq!(a, b);
        let c2 = random_unitary(2, RngSeed(6));
        assert!(a.max_abs_diff(&c2) > 1e-6);
    }

    #[test]
    fn haar_first_entry_moment() {
        // ⟨|U_00|²⟩ = 1/d for Haar sampling
        for d in [2usize, 3] {
            let n = 100_000;
            let mut rng = RngSeed(123).rng();
            let mut acc = 0.0;
            for _ in 0..n {
                acc += random_unitary_with(d, &mut rng).get(0, 0).norm_sqr();
            }
            let mean = acc / n as f64;
            assert!((mean - 1.0 / d as f64).abs() < 0.01, "d={d}: {mean}");
        }
    }

    #[test]
    fn hs_ensemble_mean_purity() {
        // HS-ensemble mean purity is 2d/(d²+1); 8/17 for d=4
        let n = 100_000;
        let mut rng = RngSeed(321).rng();
        let mut acc = 0.0;
        for _ in 0..n {
            acc += random_density_hs_with(4, &mut rng).purity();
        }
        let mean = acc / n as f64;
        assert!((mean - 8.0 / 17.0).abs() < 0.005, "{mean}");
    }

    #[test]
    fn hs_samples_are_valid_and_reproducible() {
        for d in 2..=4 {
            let mut rng = RngSeed(9).rng();
            for _ in 0..10_000 {
                let rho = random_density_hs_with(d, &mut rng);
                validate_density(rho.matrix()).unwrap();
            }
        }
        let a = random_density_hs(3, RngSeed(77));
        let b = random_density_hs(3, RngSeed(77));
        assert!(a.matrix().max_abs_diff(b.matrix()) == 0.0);
    }

    #[test]
    fn unitary_conjugation_preserves_validity() {
        let mut rng = RngSeed(55).rng();
        for _ in 0..50 {
            let rho = random_density_hs_with(4, &mut rng);
            let u = random_unitary_with(4, &mut rng);
            let rotated = rho.conjugated_by(&u).unwrap();
            validate_density(rotated.matrix()).unwrap();
        }
    }

    #[test]
    fn angle_chart_gives_unitaries() {
        let mut rng = RngSeed(2024).rng();
        for d in 2..=4 {
            for _ in 0..20 {
                let params: Vec<f64> = (0..d * d)
                    .map(|_| {
                        let x: f64 = StandardNormal.sample(&mut rng);
                        x * std::f64::consts::PI
                    })
                    .collect();
                let u = unitary_from_angles(d, &params).unwrap();
                assert!(u.unitarity_defect() < 1e-12);
            }
        }
        let u = unitary_d3_from_angles(&[0.0; 9]);
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn json_round_trip_validates() {
        let rho = random_density_hs(3, RngSeed(1));
        let s = rho.to_json();
        let back = DensityMatrix::from_json(&s).unwrap();
        assert!(rho.matrix().max_abs_diff(back.matrix()) < 1e-12);

        let bad = r#"{"dim":2,"re":[[0.6,0.0],[0.0,0.6]],"im":[[0.0,0.0],[0.0,0.0]]}"#;
        assert!(DensityMatrix::from_json(bad).is_err());
    }

    #[test]
    fn seed_children_are_distinct() {
        let s = RngSeed(0);
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000 {
            assert!(seen.insert(s.child(i).0));
        }
    }
}
