//! State factories: Werner/isotropic states, the general two-qubit Bloch
//! form, printed two-qubit example states, the one-way steerable family, the
//! bound-entangled qutrit family, and noisy GHZ / W states. Partial trace and
//! partial transpose helpers live here as well.

use crate::linalg::{
    basis_ket, kron, validate_density, vec_normalized, ComplexMatrix, DensityMatrix, LinalgError,
    C_ONE, C_ZERO,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<(), StateError> {
    if !(lo..=hi).contains(&value) || !value.is_finite() {
        return Err(StateError::OutOfRange {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

pub(crate) fn pauli_matrix(i: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    match i {
        0 => {
            m.set(0, 1, C_ONE);
            m.set(1, 0, C_ONE);
        }
        1 => {
            m.set(0, 1, Complex64::new(0.0, -1.0));
            m.set(1, 0, Complex64::new(0.0, 1.0));
        }
        2 => {
            m.set(0, 0, C_ONE);
            m.set(1, 1, -C_ONE);
        }
        _ => panic!("Pauli index must be 0..3"),
    }
    m
}

/// Bloch-form parameters of a two-qubit state: local vectors a, b and the
/// diagonal correlation vector c.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochParams {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
}

/// (1/4)[I⊗I + a·σ⊗I + I⊗b·σ + Σᵢ cᵢ σᵢ⊗σᵢ]; rejected if not positive.
pub fn two_qubit_bloch(p: &BlochParams) -> Result<DensityMatrix, StateError> {
    let i2 = ComplexMatrix::identity(2);
    let mut m = ComplexMatrix::identity(4);
    for i in 0..3 {
        let s = pauli_matrix(i);
        m = m.add(&kron(&s, &i2).scale_re(p.a[i]));
        m = m.add(&kron(&i2, &s).scale_re(p.b[i]));
        m = m.add(&kron(&s, &s).scale_re(p.c[i]));
    }
    Ok(validate_density(&m.scale_re(0.25))?)
}

/// Read back (a, b, c) from a two-qubit state.
pub fn extract_bloch(rho: &DensityMatrix) -> BlochParams {
    assert_eq!(rho.dim(), 4, "Bloch extraction needs a two-qubit state");
    let i2 = ComplexMatrix::identity(2);
    let mut p = BlochParams {
        a: [0.0; 3],
        b: [0.0; 3],
        c: [0.0; 3],
    };
    for i in 0..3 {
        let s = pauli_matrix(i);
        p.a[i] = rho.matrix().mul(&kron(&s, &i2)).trace().re;
        p.b[i] = rho.matrix().mul(&kron(&i2, &s)).trace().re;
        p.c[i] = rho.matrix().mul(&kron(&s, &s)).trace().re;
    }
    p
}

/// Full 3×3 correlation matrix T with T(i,j) = tr(ρ σᵢ⊗σⱼ).
pub fn correlation_matrix(rho: &DensityMatrix) -> [[f64; 3]; 3] {
    assert_eq!(rho.dim(), 4);
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let k = kron(&pauli_matrix(i), &pauli_matrix(j));
            *entry = rho.matrix().mul(&k).trace().re;
        }
    }
    t
}

/// Maximally entangled ket |φ⁺_d⟩ = Σᵢ |ii⟩/√d.
pub fn maximally_entangled_ket(d: usize) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; d * d];
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// Singlet ket (|01⟩ − |10⟩)/√2.
pub fn singlet_ket() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        C_ZERO,
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        C_ZERO,
    ]
}

/// Isotropic state α|φ⁺_d⟩⟨φ⁺_d| + (1−α)·I/d².
pub fn isotropic(d: usize, alpha: f64) -> Result<DensityMatrix, StateError> {
    let lo = -1.0 / ((d * d - 1) as f64);
    check_range("alpha", alpha, lo, 1.0)?;
    let dim = d * d;
    let pure = ComplexMatrix::outer(&maximally_entangled_ket(d));
    let m = pure
        .scale_re(alpha)
        .add(&ComplexMatrix::identity(dim).scale_re((1.0 - alpha) / dim as f64));
    Ok(validate_density(&m)?)
}

/// w·base + (1−w)·I/dim: the white-noise family around a base state.
pub fn noisy_family(base: &DensityMatrix, w: f64) -> Result<DensityMatrix, StateError> {
    check_range("w", w, 0.0, 1.0)?;
    let dim = base.dim();
    let m = base
        .matrix()
        .scale_re(w)
        .add(&ComplexMatrix::identity(dim).scale_re((1.0 - w) / dim as f64));
    Ok(validate_density(&m)?)
}

/// Werner state w|ψ⁻⟩⟨ψ⁻| + (1−w)·I/4.
pub fn werner(w: f64) -> Result<DensityMatrix, StateError> {
    noisy_family(&DensityMatrix::from_pure(&singlet_ket()), w)
}

/// The two printed 4×4 example states (prefactor 1/4), symmetrized by
/// (M+M†)/2 before validation. Both are strictly positive as printed: the
/// measured minimum eigenvalues are ≈ 7.0e-3 and ≈ 2.7e-3.
pub fn example_states() -> (DensityMatrix, DensityMatrix) {
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    let rho2 = ComplexMatrix::from_rows(vec![
        vec![c(0.14, 0.), c(0.09, -0.18), c(-0.12, 0.17), c(-0.06, 0.)],
        vec![c(0.09, 0.18), c(1.58, 0.), c(-1.72, 0.), c(-0.12, 0.17)],
        vec![c(-0.12, -0.17), c(-1.72, 0.), c(1.98, 0.), c(0.09, -0.18)],
        vec![c(-0.06, 0.), c(-0.12, -0.17), c(0.09, 0.18), c(0.3, 0.)],
    ])
    .unwrap()
    .scale_re(0.25);
    let rho3 = ComplexMatrix::from_rows(vec![
        vec![c(0.06, 0.), c(-0.13, 0.), c(0.16, 0.02), c(-0.02, 0.)],
        vec![c(-0.13, 0.), c(1.74, 0.), c(-1.82, 0.), c(0.16, 0.02)],
        vec![c(0.16, -0.02), c(-1.82, 0.), c(1.96, 0.), c(-0.13, 0.)],
        vec![c(-0.02, 0.), c(0.16, -0.02), c(-0.13, 0.), c(0.24, 0.)],
    ])
    .unwrap()
    .scale_re(0.25);
    let a = validate_density(&rho2.hermitized()).expect("printed state is positive");
    let b = validate_density(&rho3.hermitized()).expect("printed state is positive");
    (a, b)
}

/// One-way steerable family β|ψ(θ)⟩⟨ψ(θ)| + (1−β)(I/2)⊗ρ_B^θ with
/// |ψ(θ)⟩ = cos θ|00⟩ + sin θ|11⟩ and ρ_B^θ the reduced state of |ψ(θ)⟩.
pub fn one_way(beta: f64, theta: f64) -> Result<DensityMatrix, StateError> {
    check_range("beta", beta, 0.0, 1.0)?;
    check_range("theta", theta, 0.0, FRAC_PI_4)?;
    let mut psi = vec![C_ZERO; 4];
    psi[0] = Complex64::new(theta.cos(), 0.0);
    psi[3] = Complex64::new(theta.sin(), 0.0);
    let pure = ComplexMatrix::outer(&psi);
    let rho_b = partial_trace_a(&pure, 2, 2);
    let noise = kron(&ComplexMatrix::identity(2).scale_re(0.5), &rho_b);
    let m = pure.scale_re(beta).add(&noise.scale_re(1.0 - beta));
    Ok(validate_density(&m)?)
}

/// Parameter region on which the bound-entangled family is defined.
pub fn bes_admissible(m1: f64, m2: f64) -> bool {
    m1 >= 0.0 && m2 >= 0.0 && m1 * m1 + m2 * m2 + m1 * m2 <= 1.0 + 1e-12
}

/// Bound-entangled two-qutrit family with PPT-fixing eigenvalues.
pub fn bound_entangled(m1: f64, m2: f64) -> Result<DensityMatrix, StateError> {
    check_range("m1", m1, 0.0, 1.0)?;
    check_range("m2", m2, 0.0, 1.0)?;
    if !bes_admissible(m1, m2) {
        return Err(StateError::OutOfRange {
            name: "m1²+m2²+m1·m2",
            value: m1 * m1 + m2 * m2 + m1 * m2,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let m3 = ((1.0 - m1 * m1 - m2 * m2) / 2.0).max(0.0).sqrt();
    let n = 4.0 - 2.0 * m1 * m1 + m1 * m2 - 2.0 * m2 * m2;
    let l1 = 1.0 - (2.0 + 3.0 * m1 * m2) / n;
    let l2 = 3.0 * m1 * m2 / n;
    let l3 = 1.0 / n;

    let ket = |a: usize, b: usize| basis_ket(9, a * 3 + b);
    let re = |x: f64| Complex64::new(x, 0.0);
    let add = |u: &[Complex64], v: &[Complex64], s: Complex64| -> Vec<Complex64> {
        u.iter().zip(v).map(|(a, b)| a + s * b).collect()
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi1 = add(&ket(1, 2), &ket(2, 1), C_ONE)
        .iter()
        .map(|z| z * h)
        .collect::<Vec<_>>();
    let s3 = 1.0 / 3.0_f64.sqrt();
    let psi2: Vec<Complex64> = {
        let t = add(&ket(0, 0), &ket(1, 1), C_ONE);
        add(&t, &ket(2, 2), -C_ONE).iter().map(|z| z * s3).collect()
    };
    let psi3: Vec<Complex64> = {
        let mut v = vec![C_ZERO; 9];
        for (w, k) in [(m1, (0, 1)), (m2, (1, 0)), (m3, (1, 1)), (m3, (2, 2))] {
            let kv = ket(k.0, k.1);
            v = add(&v, &kv, re(w));
        }
        v
    };
    let psi3t: Vec<Complex64> = {
        let mut v = vec![C_ZERO; 9];
        for (w, k) in [(m1, (0, 2)), (-m2, (2, 0)), (m3, (2, 1)), (-m3, (1, 2))] {
            let kv = ket(k.0, k.1);
            v = add(&v, &kv, re(w));
        }
        v
    };
    let proj = |v: &[Complex64]| ComplexMatrix::outer(v);
    let m = proj(&psi1)
        .scale_re(l1)
        .add(&proj(&psi2).scale_re(l2))
        .add(&proj(&psi3).add(&proj(&psi3t)).scale_re(l3));
    Ok(validate_density(&m)?)
}

pub fn ghz_ket() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![C_ZERO; 8];
    v[0] = Complex64::new(h, 0.0);
    v[7] = Complex64::new(h, 0.0);
    v
}

pub fn w_ket() -> Vec<Complex64> {
    let s = 1.0 / 3.0_f64.sqrt();
    let mut v = vec![C_ZERO; 8];
    v[4] = Complex64::new(s, 0.0); // |100⟩
    v[2] = Complex64::new(s, 0.0); // |010⟩
    v[1] = Complex64::new(s, 0.0); // |001⟩
    v
}

/// γ|GHZ⟩⟨GHZ| + (1−γ)·I/8.
pub fn noisy_ghz(gamma: f64) -> Result<DensityMatrix, StateError> {
    noisy_family(&DensityMatrix::from_pure(&ghz_ket()), gamma)
}

/// δ|W⟩⟨W| + (1−δ)·I/8.
pub fn noisy_w(delta: f64) -> Result<DensityMatrix, StateError> {
    noisy_family(&DensityMatrix::from_pure(&w_ket()), delta)
}

/// |ψ_x⟩ = (|00⟩ + x|11⟩ + |22⟩)/√(2+x²) for the two-qutrit noise family.
pub fn two_qutrit_ket(x: f64) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; 9];
    v[0] = C_ONE;
    v[4] = Complex64::new(x, 0.0);
    v[8] = C_ONE;
    vec_normalized(&v)
}

/// Trace out the second factor of a (d_a·d_b)-dimensional bipartite matrix.
pub fn partial_trace_b(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    assert_eq!(m.rows(), da * db, "dimensions do not factor the matrix");
    ComplexMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|k| m.get(i * db + k, j * db + k)).sum()
    })
}

/// Trace out the first factor of a (d_a·d_b)-dimensional bipartite matrix.
pub fn partial_trace_a(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    assert_eq!(m.rows(), da * db, "dimensions do not factor the matrix");
    ComplexMatrix::from_fn(db, db, |k, l| {
        (0..da).map(|i| m.get(i * db + k, i * db + l)).sum()
    })
}

/// Transpose the first factor: (T_A ⊗ I)(ρ).
pub fn partial_transpose_a(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    assert_eq!(m.rows(), da * db, "dimensions do not factor the matrix");
    ComplexMatrix::from_fn(da * db, da * db, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        m.get(j * db + k, i * db + l)
    })
}

/// Named single-parameter state families addressable from the CLI; the free
/// parameter is the visibility / noise weight in [0, 1] (β for the one-way
/// family, α for isotropic states).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StateFamily {
    Werner,
    NoisyExampleTwo,
    NoisyExampleThree,
    NoisyQutritPair { x: f64 },
    Isotropic { d: usize },
    OneWay { theta: f64 },
    NoisyGhz,
    NoisyW,
}

impl StateFamily {
    pub fn state(&self, t: f64) -> Result<DensityMatrix, StateError> {
        match self {
            StateFamily::Werner => werner(t),
            StateFamily::NoisyExampleTwo => noisy_family(&example_states().0, t),
            StateFamily::NoisyExampleThree => noisy_family(&example_states().1, t),
            StateFamily::NoisyQutritPair { x } => {
                noisy_family(&DensityMatrix::from_pure(&two_qutrit_ket(*x)), t)
            }
            StateFamily::Isotropic { d } => isotropic(*d, t),
            StateFamily::OneWay { theta } => one_way(t, *theta),
            StateFamily::NoisyGhz => noisy_ghz(t),
            StateFamily::NoisyW => noisy_w(t),
        }
    }

    /// Hilbert-space dimension of each party.
    pub fn party_dims(&self) -> Vec<usize> {
        match self {
            StateFamily::Werner
            | StateFamily::NoisyExampleTwo
            | StateFamily::NoisyExampleThree
            | StateFamily::OneWay { .. } => vec![2, 2],
            StateFamily::NoisyQutritPair { .. } => vec![3, 3],
            StateFamily::Isotropic { d } => vec![*d, *d],
            StateFamily::NoisyGhz | StateFamily::NoisyW => vec![2, 2, 2],
        }
    }

    pub fn label(&self) -> String {
        match self {
            StateFamily::Werner => "werner".into(),
            StateFamily::NoisyExampleTwo => "example2".into(),
            StateFamily::NoisyExampleThree => "example3".into(),
            StateFamily::NoisyQutritPair { x } => format!("qutrit-pair-x{x}"),
            StateFamily::Isotropic { d } => format!("isotropic-d{d}"),
            StateFamily::OneWay { theta } => format!("one-way-theta{theta:.4}"),
            StateFamily::NoisyGhz => "noisy-ghz".into(),
            StateFamily::NoisyW => "noisy-w".into(),
        }
    }
}
