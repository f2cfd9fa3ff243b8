//! Dense statevector and density-matrix simulation for a few qubits.
//!
//! Qubit 0 is the leftmost tensor factor. Basis-state indices are big-endian
//! in qubit order, so qubit `j` of a `q`-qubit register is bit `q - 1 - j` of
//! the index.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;
/// Tolerance for construction invariants (normalization, trace, Hermiticity).
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for derived comparisons (orthogonality, probability sums).
pub const DERIVED_TOL: f64 = 1e-10;

const SQRT_HALF: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QsimError {
    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("{0} qubits exceeds the {MAX_QUBITS}-qubit limit")]
    TooManyQubits(usize),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("phase oracle entries must be +1 or -1")]
    BadSign,
    #[error("mixture weights must be non-negative and sum to 1 (sum {0})")]
    BadWeights(f64),
    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(f64),
    #[error("matrix trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("matrix has negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("basis vectors {0} and {1} are not orthonormal")]
    NotOrthonormal(usize, usize),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
}

fn qubits_for_dim(dim: usize) -> Result<usize, QsimError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QsimError::NotPowerOfTwo(dim));
    }
    let q = dim.trailing_zeros() as usize;
    if q > MAX_QUBITS {
        return Err(QsimError::TooManyQubits(q));
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    X,
    Z,
    H,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let qubits = qubits_for_dim(amps.len())?;
        let state = StateVector { qubits, amps };
        let n = state.norm_sqr();
        if (n - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(QsimError::NotNormalized(n));
        }
        Ok(state)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self, QsimError> {
        StateVector::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self, QsimError> {
        if qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(qubits));
        }
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(QsimError::LengthMismatch { expected: dim, got: index });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubits, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QsimError> {
        if self.dim() != other.dim() {
            return Err(QsimError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, with `self` on the leftmost qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QsimError> {
        let qubits = self.qubits + other.qubits;
        if qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits(qubits));
        }
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { qubits, amps })
    }

    pub fn apply_gate(&self, gate: Gate, qubit: usize) -> Result<StateVector, QsimError> {
        if qubit >= self.qubits {
            return Err(QsimError::QubitOutOfRange { index: qubit, qubits: self.qubits });
        }
        let mask = 1usize << (self.qubits - 1 - qubit);
        let mut out = self.amps.clone();
        for i in 0..self.dim() {
            if i & mask != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | mask]);
            let (b0, b1) = match gate {
                Gate::X => (a1, a0),
                Gate::Z => (a0, -a1),
                Gate::H => ((a0 + a1) * SQRT_HALF, (a0 - a1) * SQRT_HALF),
            };
            out[i] = b0;
            out[i | mask] = b1;
        }
        Ok(StateVector { qubits: self.qubits, amps: out })
    }

    /// Multiplies the amplitude of basis state `i` by `signs[i]`.
    pub fn apply_phase_oracle(&self, signs: &[i8]) -> Result<StateVector, QsimError> {
        self.apply_register_phase(0, self.qubits, signs)
    }

    /// Phase oracle on the sub-register `first..first + width`: the amplitude
    /// of every basis state is multiplied by `signs[c]`, where `c` is the
    /// big-endian content of that sub-register.
    pub fn apply_register_phase(&self, first: usize, width: usize, signs: &[i8]) -> Result<StateVector, QsimError> {
        if first + width > self.qubits {
            return Err(QsimError::QubitOutOfRange { index: first + width - 1, qubits: self.qubits });
        }
        if signs.len() != 1 << width {
            return Err(QsimError::LengthMismatch { expected: 1 << width, got: signs.len() });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(QsimError::BadSign);
        }
        let shift = self.qubits - first - width;
        let field = (1usize << width) - 1;
        let amps =
            self.amps.iter().enumerate().map(|(i, a)| if signs[(i >> shift) & field] < 0 { -a } else { *a }).collect();
        Ok(StateVector { qubits: self.qubits, amps })
    }

    pub fn projector(&self) -> DensityMatrix {
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix { qubits: self.qubits, dim: d, data }
    }
}

/// The `k`-qubit GHZ state `(|0^k> + |1^k>)/sqrt 2`.
pub fn ghz(k: usize) -> Result<StateVector, QsimError> {
    if k == 0 {
        return Err(QsimError::LengthMismatch { expected: 1, got: 0 });
    }
    if k > MAX_QUBITS {
        return Err(QsimError::TooManyQubits(k));
    }
    let dim = 1usize << k;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(SQRT_HALF, 0.0);
    amps[dim - 1] = Complex64::new(SQRT_HALF, 0.0);
    Ok(StateVector { qubits: k, amps })
}

/// An orthonormal basis; measuring in it is a PVM.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<StateVector>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<StateVector>) -> Result<Self, QsimError> {
        let dim = vectors.first().map_or(0, |v| v.dim());
        qubits_for_dim(dim)?;
        if vectors.len() != dim {
            return Err(QsimError::LengthMismatch { expected: dim, got: vectors.len() });
        }
        for (i, a) in vectors.iter().enumerate() {
            if a.dim() != dim {
                return Err(QsimError::DimensionMismatch(dim, a.dim()));
            }
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (a.inner(b)?.norm() - expected).abs() > DERIVED_TOL {
                    return Err(QsimError::NotOrthonormal(i, j));
                }
            }
        }
        Ok(MeasurementBasis { vectors })
    }

    pub fn computational(qubits: usize) -> Result<Self, QsimError> {
        let vectors = (0..1usize << qubits).map(|i| StateVector::basis(qubits, i)).collect::<Result<_, _>>()?;
        Ok(MeasurementBasis { vectors })
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn qubit_count(&self) -> usize {
        self.vectors[0].qubit_count()
    }

    /// Product basis; outcome index is `self_index * other.len() + other_index`.
    pub fn tensor(&self, other: &MeasurementBasis) -> Result<Self, QsimError> {
        let mut vectors = Vec::with_capacity(self.len() * other.len());
        for a in &self.vectors {
            for b in &other.vectors {
                vectors.push(a.tensor(b)?);
            }
        }
        Ok(MeasurementBasis { vectors })
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let g = a.inner(b).map_or(f64::INFINITY, |z| z.norm_sqr());
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - expected).abs());
            }
        }
        worst
    }
}

/// The basis `(|y,0> + (-1)^z |ȳ,1>)/sqrt 2` on `k` qubits, where `y` ranges
/// over `k-1` bits. The outcome index is the big-endian integer of the string
/// `y_1 ... y_(k-1) z`.
pub fn phi_basis(k: usize) -> Result<MeasurementBasis, QsimError> {
    if k < 2 {
        return Err(QsimError::LengthMismatch { expected: 2, got: k });
    }
    if k > MAX_QUBITS {
        return Err(QsimError::TooManyQubits(k));
    }
    let dim = 1usize << k;
    let y_mask = (1usize << (k - 1)) - 1;
    let mut vectors = Vec::with_capacity(dim);
    for outcome in 0..dim {
        let y = outcome >> 1;
        let z = outcome & 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[y << 1] = Complex64::new(SQRT_HALF, 0.0);
        let sign = if z == 1 { -SQRT_HALF } else { SQRT_HALF };
        amps[((!y & y_mask) << 1) | 1] = Complex64::new(sign, 0.0);
        vectors.push(StateVector { qubits: k, amps });
    }
    Ok(MeasurementBasis { vectors })
}

/// Outcome probabilities `|<b_i|psi>|^2`.
pub fn measure(state: &StateVector, basis: &MeasurementBasis) -> Result<Vec<f64>, QsimError> {
    if basis.is_empty() || basis.vectors[0].dim() != state.dim() {
        let d = basis.vectors.first().map_or(0, |v| v.dim());
        return Err(QsimError::DimensionMismatch(state.dim(), d));
    }
    basis.vectors.iter().map(|b| b.inner(state).map(|z| z.norm_sqr())).collect()
}

/// Hermitian, unit-trace, positive semidefinite matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates all three invariants (the PSD check diagonalizes, so this is
    /// the slow constructor).
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, QsimError> {
        let qubits = qubits_for_dim(dim)?;
        if data.len() != dim * dim {
            return Err(QsimError::LengthMismatch { expected: dim * dim, got: data.len() });
        }
        let rho = DensityMatrix { qubits, dim, data };
        let h = rho.hermiticity_defect();
        if h > CONSTRUCTION_TOL {
            return Err(QsimError::NotHermitian(h));
        }
        let t = rho.trace();
        if (t - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(QsimError::BadTrace(t));
        }
        let e = rho.min_eigenvalue();
        if e < -DERIVED_TOL {
            return Err(QsimError::NotPositive(e));
        }
        Ok(rho)
    }

    /// Diagonal matrix of a probability vector (a classical message
    /// distribution viewed as a quantum state).
    pub fn diagonal(probabilities: &[f64]) -> Result<Self, QsimError> {
        let dim = probabilities.len();
        let qubits = qubits_for_dim(dim)?;
        let sum: f64 = probabilities.iter().sum();
        if probabilities.iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(QsimError::BadWeights(sum));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &p) in probabilities.iter().enumerate() {
            data[i * dim + i] = Complex64::new(p, 0.0);
        }
        Ok(DensityMatrix { qubits, dim, data })
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self, QsimError> {
        let dim = 1usize << qubits;
        DensityMatrix::diagonal(&vec![1.0 / dim as f64; dim])
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `tr(self * other)`; real for Hermitian arguments.
    pub fn trace_product(&self, other: &DensityMatrix) -> Result<f64, QsimError> {
        self.same_dim(other)?;
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.data[i * d + j] * other.data[j * d + i];
            }
        }
        Ok(acc.re)
    }

    /// Matrix product. The result is generally not a density matrix, so it is
    /// returned as raw row-major entries.
    pub fn product(&self, other: &DensityMatrix) -> Result<Vec<Complex64>, QsimError> {
        self.same_dim(other)?;
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    fn same_dim(&self, other: &DensityMatrix) -> Result<(), QsimError> {
        if self.dim != other.dim {
            return Err(QsimError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Smallest eigenvalue, by cyclic Jacobi on the real symmetric embedding
    /// `[[Re, -Im], [Im, Re]]` (whose spectrum is that of `self`, doubled).
    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dim;
        let n = 2 * d;
        let mut a = vec![0.0f64; n * n];
        for i in 0..d {
            for j in 0..d {
                let z = self.get(i, j);
                a[i * n + j] = z.re;
                a[(i + d) * n + (j + d)] = z.re;
                a[i * n + (j + d)] = -z.im;
                a[(i + d) * n + j] = z.im;
            }
        }
        jacobi_eigenvalues(&mut a, n).into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Eigenvalues of a real symmetric `n x n` matrix (destroys `a`).
fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

fn check_weights<'a>(weights: impl Iterator<Item = &'a f64>) -> Result<(), QsimError> {
    let mut sum = 0.0;
    for &w in weights {
        if w < 0.0 || w.is_nan() {
            return Err(QsimError::BadWeights(w));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > CONSTRUCTION_TOL {
        return Err(QsimError::BadWeights(sum));
    }
    Ok(())
}

/// `sum_i w_i |psi_i><psi_i|`.
pub fn mix(ensemble: &[(f64, StateVector)]) -> Result<DensityMatrix, QsimError> {
    check_weights(ensemble.iter().map(|(w, _)| w))?;
    let first = &ensemble[0].1;
    let d = first.dim();
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for (w, psi) in ensemble {
        if psi.dim() != d {
            return Err(QsimError::DimensionMismatch(d, psi.dim()));
        }
        let amps = psi.amplitudes();
        for i in 0..d {
            let ai = amps[i] * *w;
            if ai.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..d {
                data[i * d + j] += ai * amps[j].conj();
            }
        }
    }
    Ok(DensityMatrix { qubits: first.qubit_count(), dim: d, data })
}

/// `sum_i w_i rho_i`.
pub fn mix_densities(ensemble: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix, QsimError> {
    check_weights(ensemble.iter().map(|(w, _)| w))?;
    let first = ensemble[0].1;
    let mut data = vec![Complex64::new(0.0, 0.0); first.data.len()];
    for (w, rho) in ensemble {
        first.same_dim(rho)?;
        for (acc, z) in data.iter_mut().zip(&rho.data) {
            *acc += z * *w;
        }
    }
    Ok(DensityMatrix { qubits: first.qubits, dim: first.dim, data })
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Frobenius norm of `a - b`.
pub fn matrix_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QsimError> {
    a.same_dim(b)?;
    let s: f64 = a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok(libm::sqrt(s))
}

/// Frobenius norm of a raw row-major matrix.
pub fn frobenius_norm(entries: &[Complex64]) -> f64 {
    libm::sqrt(entries.iter().map(|z| z.norm_sqr()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = SQRT_HALF;

    fn approx_state(s: &StateVector, expected: &[f64]) {
        assert_eq!(s.dim(), expected.len());
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-12 && a.im.abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn ghz_definition() {
        approx_state(&ghz(1).unwrap(), &[H, H]);
        approx_state(&ghz(2).unwrap(), &[H, 0.0, 0.0, H]);
        approx_state(&ghz(3).unwrap(), &[H, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, H]);
        assert!(ghz(0).is_err());
    }

    #[test]
    fn gate_examples() {
        let zero = StateVector::basis(1, 0).unwrap();
        approx_state(&zero.apply_gate(Gate::H, 0).unwrap(), &[H, H]);
        let bell = ghz(2).unwrap();
        approx_state(&bell.apply_gate(Gate::Z, 0).unwrap(), &[H, 0.0, 0.0, -H]);
        let s = StateVector::basis(2, 0).unwrap().apply_gate(Gate::X, 1).unwrap();
        approx_state(&s, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(bell.apply_gate(Gate::X, 2), Err(QsimError::QubitOutOfRange { index: 2, qubits: 2 }));
    }

    #[test]
    fn phase_oracle_examples() {
        let plus = ghz(1).unwrap();
        assert_eq!(plus.apply_phase_oracle(&[1, 1]).unwrap(), plus);
        approx_state(&plus.apply_phase_oracle(&[1, -1]).unwrap(), &[H, -H]);
        // x = 0110 on the uniform two-qubit state
        let uniform = StateVector::from_real(&[0.5; 4]).unwrap();
        let signs: Vec<i8> = "0110".chars().map(|c| if c == '1' { -1 } else { 1 }).collect();
        approx_state(&uniform.apply_phase_oracle(&signs).unwrap(), &[0.5, -0.5, -0.5, 0.5]);
        assert!(matches!(uniform.apply_phase_oracle(&[1, 1]), Err(QsimError::LengthMismatch { expected: 4, got: 2 })));
    }

    #[test]
    fn phi_basis_two_qubits() {
        let b = phi_basis(2).unwrap();
        approx_state(&b.vectors()[0], &[H, 0.0, 0.0, H]);
        approx_state(&b.vectors()[1], &[H, 0.0, 0.0, -H]);
        // y=1: (|10> ± |01>)/sqrt 2
        approx_state(&b.vectors()[2], &[0.0, H, H, 0.0]);
        approx_state(&b.vectors()[3], &[0.0, -H, H, 0.0]);
    }

    #[test]
    fn phi_basis_is_orthonormal() {
        for k in 2..=6 {
            let b = phi_basis(k).unwrap();
            assert_eq!(b.len(), 1 << k);
            assert!(b.orthonormality_defect() < 1e-10, "k={k}");
            assert!(MeasurementBasis::new(b.vectors().to_vec()).is_ok());
        }
    }

    #[test]
    fn measurement_examples() {
        let b = phi_basis(2).unwrap();
        let p = measure(&ghz(2).unwrap(), &b).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
        let minus = StateVector::from_real(&[H, 0.0, 0.0, -H]).unwrap();
        let p = measure(&minus, &b).unwrap();
        assert!((p[1] - 1.0).abs() < 1e-12);
        for (i, v) in b.vectors().iter().enumerate() {
            let p = measure(v, &b).unwrap();
            for (j, pj) in p.iter().enumerate() {
                assert!((pj - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert!(measure(&ghz(3).unwrap(), &b).is_err());
    }

    #[test]
    fn mixtures_and_purity() {
        let psi = ghz(2).unwrap();
        let rho = mix(&[(1.0, psi.clone())]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);

        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let mixed = mix(&[(0.5, zero.clone()), (0.5, one.clone())]).unwrap();
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(matrix_distance(&mixed, &half).unwrap() < 1e-15);
        assert!((mixed.purity() - 0.5).abs() < 1e-15);

        let b = phi_basis(2).unwrap();
        let rank2 = mix(&[(0.5, b.vectors()[0].clone()), (0.5, b.vectors()[2].clone())]).unwrap();
        assert!((rank2.purity() - 0.5).abs() < 1e-12);

        assert!(matches!(mix(&[(0.4, zero.clone()), (0.4, one)]), Err(QsimError::BadWeights(_))));
        assert!(matches!(mix(&[(-0.5, zero.clone()), (1.5, zero)]), Err(QsimError::BadWeights(_))));
    }

    #[test]
    fn distances() {
        let zero = StateVector::basis(1, 0).unwrap().projector();
        let one = StateVector::basis(1, 1).unwrap().projector();
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        assert_eq!(matrix_distance(&zero, &zero).unwrap(), 0.0);
        assert!((matrix_distance(&half, &zero).unwrap() - libm::sqrt(0.5)).abs() < 1e-15);
        assert!((matrix_distance(&zero, &one).unwrap() - libm::sqrt(2.0)).abs() < 1e-15);
        let big = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matrix_distance(&zero, &big).is_err());
    }

    #[test]
    fn maximally_mixed_purity() {
        for q in 0..5 {
            let rho = DensityMatrix::maximally_mixed(q).unwrap();
            assert!((rho.purity() - 1.0 / (1 << q) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn density_validation() {
        let c = |re: f64| Complex64::new(re, 0.0);
        assert!(DensityMatrix::new(2, vec![c(0.5), c(0.0), c(0.0), c(0.5)]).is_ok());
        assert!(matches!(DensityMatrix::new(2, vec![c(0.5), c(0.1), c(0.0), c(0.5)]), Err(QsimError::NotHermitian(_))));
        assert!(matches!(DensityMatrix::new(2, vec![c(0.5), c(0.0), c(0.0), c(0.6)]), Err(QsimError::BadTrace(_))));
        // eigenvalues 1.5 and -0.5
        assert!(matches!(DensityMatrix::new(2, vec![c(0.5), c(1.0), c(1.0), c(0.5)]), Err(QsimError::NotPositive(_))));
    }

    #[test]
    fn jacobi_on_complex_hermitian() {
        // [[1/2, -i/2],[i/2, 1/2]] is the projector onto (|0> + i|1>)/sqrt 2
        let rho = DensityMatrix::new(
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, -0.5),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        assert!(rho.min_eigenvalue().abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }
}
