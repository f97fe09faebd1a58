//! State tomography emulation by linear inversion of Pauli expectations.
//!
//! In exact mode the reconstruction is the identity on valid states. With a
//! finite shot budget each expectation is estimated from binomially sampled
//! two-outcome measurements, and the linear inversion is projected back onto
//! the physical set (eigenvalue clipping plus trace renormalization).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::error::Error;
use crate::matrix::Operator;
use crate::state::{expectation, pauli_basis_1q, project_to_physical, QuantumState};
use crate::Result;

fn estimate_expectation(exact: f64, shots: Option<u64>, rng: &mut ChaCha8Rng) -> Result<f64> {
    match shots {
        None => Ok(exact),
        Some(0) => Err(Error::InvalidState("shot count must be at least 1".into())),
        Some(n) => {
            let p = (0.5 * (1.0 + exact)).clamp(0.0, 1.0);
            let dist = rand_distr::Binomial::new(n, p)
                .map_err(|e| Error::InvalidState(format!("binomial sampling: {e}")))?;
            let ups = dist.sample(rng);
            Ok(2.0 * ups as f64 / n as f64 - 1.0)
        }
    }
}

/// Single-qubit reconstruction rho = (I + sum_i <s_i> s_i) / 2.
pub fn tomography_1q(state: &QuantumState, shots: Option<u64>, seed: u64) -> Result<QuantumState> {
    if state.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: state.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recon = Operator::identity(2).scale_re(0.5);
    for pauli in pauli_basis_1q() {
        let est = estimate_expectation(expectation(state, &pauli)?, shots, &mut rng)?;
        recon.add_scaled_assign(num_complex::Complex64::new(0.5 * est, 0.0), &pauli);
    }
    project_to_physical(&recon, vec![2])
}

/// Two-qubit reconstruction from the 15 nontrivial Pauli expectations.
pub fn tomography_2q(state: &QuantumState, shots: Option<u64>, seed: u64) -> Result<QuantumState> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: state.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Operator> = vec![Operator::identity(2)];
    basis.extend(pauli_basis_1q());
    let mut recon = Operator::identity(4).scale_re(0.25);
    for i in 0..4 {
        for j in 0..4 {
            if i == 0 && j == 0 {
                continue;
            }
            let obs = basis[i].kron(&basis[j]);
            let est = estimate_expectation(expectation(state, &obs)?, shots, &mut rng)?;
            recon.add_scaled_assign(num_complex::Complex64::new(0.25 * est, 0.0), &obs);
        }
    }
    project_to_physical(&recon, vec![2, 2])
}
