//! Pure state vectors and density matrices with declared tensor structure,
//! plus the state-level measures used throughout: Uhlmann fidelity, partial
//! trace, Bloch vectors, and populations.

use num_complex::Complex64 as C64;

use crate::error::Error;
use crate::matrix::{sigma_x, sigma_y, sigma_z, Operator};
use crate::Result;

const NORM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIG_FLOOR: f64 = -1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    PureVector,
    DensityMatrix,
}

#[derive(Clone, Debug)]
enum Repr {
    Pure(Vec<C64>),
    Density(Operator),
}

/// A quantum state of a declared dimension and tensor factorization.
#[derive(Clone, Debug)]
pub struct QuantumState {
    tensor_factors: Vec<usize>,
    repr: Repr,
}

impl QuantumState {
    /// Pure state from amplitudes; must be normalized to 1e-10.
    pub fn pure(amplitudes: Vec<C64>, tensor_factors: Vec<usize>) -> Result<Self> {
        let dim: usize = tensor_factors.iter().product();
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: amplitudes.len() });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("pure state norm {norm} is not 1")));
        }
        Ok(QuantumState { tensor_factors, repr: Repr::Pure(amplitudes) })
    }

    /// Density matrix; must be Hermitian, trace one, and positive
    /// semidefinite (eigenvalues >= -1e-9).
    pub fn density(matrix: Operator, tensor_factors: Vec<usize>) -> Result<Self> {
        let dim: usize = tensor_factors.iter().product();
        if matrix.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.dim() });
        }
        if !matrix.is_hermitian() {
            return Err(Error::NotHermitian { norm: matrix.hermiticity_error() });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("density trace {tr} is not 1")));
        }
        let (evals, _) = matrix.eig_hermitian()?;
        if let Some(&min) = evals.first() {
            if min < EIG_FLOOR {
                return Err(Error::NotPositive { eigenvalue: min });
            }
        }
        Ok(QuantumState { tensor_factors, repr: Repr::Density(matrix) })
    }

    /// Computational basis state |index> of the given dimension.
    pub fn basis(dim: usize, index: usize, tensor_factors: Vec<usize>) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidState(format!("basis index {index} out of range {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::pure(amps, tensor_factors)
    }

    /// Single-qubit basis shorthand.
    pub fn qubit_basis(index: usize) -> Self {
        Self::basis(2, index, vec![2]).unwrap()
    }

    /// Two-qubit basis state |q3 q4>, e.g. `two_qubit_basis(1, 0)` for |10>.
    pub fn two_qubit_basis(first: usize, second: usize) -> Self {
        Self::basis(4, first * 2 + second, vec![2, 2]).unwrap()
    }

    /// Maximally mixed state of the given dimension.
    pub fn maximally_mixed(dim: usize, tensor_factors: Vec<usize>) -> Result<Self> {
        Self::density(Operator::identity(dim).scale_re(1.0 / dim as f64), tensor_factors)
    }

    pub fn dim(&self) -> usize {
        self.tensor_factors.iter().product()
    }

    pub fn tensor_factors(&self) -> &[usize] {
        &self.tensor_factors
    }

    pub fn kind(&self) -> StateKind {
        match &self.repr {
            Repr::Pure(_) => StateKind::PureVector,
            Repr::Density(_) => StateKind::DensityMatrix,
        }
    }

    pub fn amplitudes(&self) -> Option<&[C64]> {
        match &self.repr {
            Repr::Pure(a) => Some(a),
            Repr::Density(_) => None,
        }
    }

    /// Density-matrix representation (|psi><psi| for pure states).
    pub fn density_matrix(&self) -> Operator {
        match &self.repr {
            Repr::Pure(a) => {
                let n = a.len();
                let mut m = Operator::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = a[i] * a[j].conj();
                    }
                }
                m
            }
            Repr::Density(m) => m.clone(),
        }
    }

    /// Population of the computational basis state `index`.
    pub fn population(&self, index: usize) -> f64 {
        match &self.repr {
            Repr::Pure(a) => a[index].norm_sqr(),
            Repr::Density(m) => m[(index, index)].re,
        }
    }

    /// <psi| rho |psi> against a pure reference.
    pub fn overlap_with_pure(&self, reference: &QuantumState) -> Result<f64> {
        let amps = reference
            .amplitudes()
            .ok_or_else(|| Error::InvalidState("reference must be a pure state".into()))?;
        if reference.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: reference.dim() });
        }
        match &self.repr {
            Repr::Pure(a) => {
                let ip: C64 = amps.iter().zip(a.iter()).map(|(r, s)| r.conj() * s).sum();
                Ok(ip.norm_sqr().min(1.0))
            }
            Repr::Density(m) => {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        acc += amps[i].conj() * m[(i, j)] * amps[j];
                    }
                }
                Ok(acc.re.clamp(0.0, 1.0))
            }
        }
    }
}

/// Uhlmann fidelity F = Tr sqrt( sqrt(rho_ideal) rho_exp sqrt(rho_ideal) ).
///
/// Symmetric in its arguments and equal to 1 iff the states coincide. When
/// either state is pure the exact shortcut sqrt(<psi|rho|psi>) is used.
pub fn fidelity(rho_ideal: &QuantumState, rho_exp: &QuantumState) -> Result<f64> {
    if rho_ideal.dim() != rho_exp.dim() {
        return Err(Error::DimensionMismatch { expected: rho_ideal.dim(), got: rho_exp.dim() });
    }
    let f = match (&rho_ideal.repr, &rho_exp.repr) {
        (Repr::Pure(_), _) => rho_exp.overlap_with_pure(rho_ideal)?.sqrt(),
        (_, Repr::Pure(_)) => rho_ideal.overlap_with_pure(rho_exp)?.sqrt(),
        (Repr::Density(a), Repr::Density(b)) => {
            let ra = a.sqrt_psd()?;
            let m = ra.mul(b).mul(&ra);
            let (evals, _) = m.eig_hermitian()?;
            evals.iter().map(|e| e.max(0.0).sqrt()).sum()
        }
    };
    Ok(f.min(1.0))
}

/// Partial trace of a two-qubit state, keeping subsystem `keep` (0 or 1).
pub fn partial_trace(state: &QuantumState, keep: usize) -> Result<QuantumState> {
    let factors = state.tensor_factors();
    if factors.len() != 2 {
        return Err(Error::InvalidState(format!(
            "partial trace needs two tensor factors, got {factors:?}"
        )));
    }
    if keep > 1 {
        return Err(Error::InvalidState(format!("subsystem index {keep} out of range")));
    }
    let (d0, d1) = (factors[0], factors[1]);
    let rho = state.density_matrix();
    let dk = if keep == 0 { d0 } else { d1 };
    let mut out = Operator::zeros(dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            if keep == 0 {
                for k in 0..d1 {
                    acc += rho[(i * d1 + k, j * d1 + k)];
                }
            } else {
                for k in 0..d0 {
                    acc += rho[(k * d1 + i, k * d1 + j)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    QuantumState::density(out, vec![dk])
}

/// Bloch vector (<sx>, <sy>, <sz>) of a single-qubit state.
pub fn bloch_vector(state: &QuantumState) -> Result<[f64; 3]> {
    if state.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: state.dim() });
    }
    let rho = state.density_matrix();
    let x = 2.0 * rho[(0, 1)].re;
    let y = -2.0 * rho[(0, 1)].im;
    let z = rho[(0, 0)].re - rho[(1, 1)].re;
    Ok([x, y, z])
}

/// Project a Hermitian reconstruction onto the nearest valid density matrix
/// by clipping negative eigenvalues and renormalizing the trace.
pub fn project_to_physical(matrix: &Operator, tensor_factors: Vec<usize>) -> Result<QuantumState> {
    let sym = matrix.add(&matrix.dagger()).scale_re(0.5);
    let (evals, vecs) = sym.eig_hermitian()?;
    let mut diag = Operator::zeros(sym.dim());
    let mut total = 0.0;
    for (i, &e) in evals.iter().enumerate() {
        let clipped = e.max(0.0);
        diag[(i, i)] = C64::new(clipped, 0.0);
        total += clipped;
    }
    if total <= 0.0 {
        return Err(Error::InvalidState("reconstruction has no positive weight".into()));
    }
    let rho = vecs.mul(&diag).mul(&vecs.dagger()).scale_re(1.0 / total);
    QuantumState::density(rho, tensor_factors)
}

/// Expectation value of a Hermitian observable.
pub fn expectation(state: &QuantumState, observable: &Operator) -> Result<f64> {
    if observable.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), got: observable.dim() });
    }
    let rho = state.density_matrix();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            acc += rho[(i, j)] * observable[(j, i)];
        }
    }
    Ok(acc.re)
}

/// The three single-qubit Pauli observables in index order x, y, z.
pub fn pauli_basis_1q() -> [Operator; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}
