//! Dense complex matrices for small fixed dimensions (2 and 4 in practice):
//! Hermitian eigendecomposition, matrix exponential, PSD square root, Pauli
//! decomposition.
//!
//! Everything here is sized for qubit-scale work. The eigensolver is a cyclic
//! complex Jacobi iteration, which is exact to machine precision for these
//! dimensions; the matrix exponential uses the closed 2x2 form and the
//! eigendecomposition route for larger matrices.

use num_complex::Complex64 as C64;

use crate::error::Error;
use crate::Result;

/// Relative Frobenius tolerance for treating a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Frobenius tolerance for treating a matrix as unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Dense complex square matrix, row-major.
///
/// Hamiltonian entries carry units of rad/s; unitaries and projectors are
/// dimensionless. Values are immutable in practice: operations return new
/// matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from row-major complex entries.
    pub fn from_rows(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        Ok(Operator { dim, data: entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Relative Frobenius norm of the anti-Hermitian part.
    pub fn hermiticity_error(&self) -> f64 {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut err = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                err += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        // Each pair counted twice; the factor cancels in practice but keep
        // the exact definition ||A - A^dag||_F / ||A||_F.
        err.sqrt() / norm
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITICITY_TOL
    }

    /// ||U^dag U - I||_F
    pub fn unitarity_error(&self) -> f64 {
        let mut p = self.dagger().mul(self);
        for i in 0..self.dim {
            p[(i, i)] -= C64::new(1.0, 0.0);
        }
        p.frobenius_norm()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= UNITARITY_TOL
    }

    pub fn mul(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// out = self * rhs, reusing an existing buffer.
    pub fn mul_into(&self, rhs: &Operator, out: &mut Operator) {
        let n = self.dim;
        debug_assert_eq!(rhs.dim, n);
        debug_assert_eq!(out.dim, n);
        out.data.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
    }

    pub fn add(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: C64) -> Operator {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(C64::new(c, 0.0))
    }

    /// self += c * rhs
    pub fn add_scaled_assign(&mut self, c: C64, rhs: &Operator) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += c * b;
        }
    }

    /// Kronecker product self (x) rhs.
    pub fn kron(&self, rhs: &Operator) -> Operator {
        let (n, m) = (self.dim, rhs.dim);
        let mut out = Operator::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Apply to a state vector: out = self * v.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        debug_assert_eq!(v.len(), n);
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Eigendecomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues in ascending order and an orthonormal matrix whose
    /// columns are the corresponding eigenvectors. The global phase of every
    /// eigenvector is fixed by making its largest-magnitude component real
    /// and positive, so repeated calls along a parameter sweep produce
    /// continuous vectors.
    pub fn eig_hermitian(&self) -> Result<(Vec<f64>, Operator)> {
        let herr = self.hermiticity_error();
        if herr > HERMITICITY_TOL {
            return Err(Error::NotHermitian { norm: herr });
        }
        let n = self.dim;
        let mut a = self.clone();
        let mut v = Operator::identity(n);
        let scale = self.frobenius_norm().max(1.0);

        let off = |a: &Operator| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s += a[(i, j)].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        let max_sweeps = 60;
        let mut sweeps = 0;
        while off(&a) > 1e-15 * scale {
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::EigNoConvergence { sweeps, off: off(&a) });
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let m = apq.norm();
                    if m <= 1e-300 {
                        a[(p, q)] = C64::new(0.0, 0.0);
                        a[(q, p)] = C64::new(0.0, 0.0);
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase = apq / m;
                    // Rotation angle zeroing the (p,q) element of the 2x2
                    // subproblem [[app, m], [m, aqq]] after factoring the
                    // phase out of the off-diagonal entry.
                    let tau = (aqq - app) / (2.0 * m);
                    let t = if tau == 0.0 {
                        1.0
                    } else {
                        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let sigma = phase * s; // complex sine

                    // A <- U^dag A U with U = I except
                    // U[p][p] = c, U[p][q] = sigma, U[q][p] = -conj(sigma), U[q][q] = c
                    for k in 0..n {
                        if k == p || k == q {
                            continue;
                        }
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c - akq * sigma.conj();
                        a[(k, q)] = akp * sigma + akq * c;
                        a[(p, k)] = a[(k, p)].conj();
                        a[(q, k)] = a[(k, q)].conj();
                    }
                    let new_pp = c * c * app - 2.0 * s * c * m + s * s * aqq;
                    let new_qq = s * s * app + 2.0 * s * c * m + c * c * aqq;
                    a[(p, p)] = C64::new(new_pp, 0.0);
                    a[(q, q)] = C64::new(new_qq, 0.0);
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);

                    // V <- V U (columns accumulate eigenvectors)
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * sigma.conj();
                        v[(k, q)] = vkp * sigma + vkq * c;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

        let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut vectors = Operator::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            // Deterministic global phase: largest-magnitude component real
            // and positive.
            let mut best = 0;
            let mut best_mag = 0.0;
            for k in 0..n {
                let mag = v[(k, src)].norm();
                if mag > best_mag + 1e-15 {
                    best_mag = mag;
                    best = k;
                }
            }
            let pivot = v[(best, src)];
            let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { C64::new(1.0, 0.0) };
            for k in 0..n {
                vectors[(k, col)] = v[(k, src)] * phase;
            }
        }
        Ok((eigenvalues, vectors))
    }

    /// Propagator U = exp(-i H t) for a Hermitian H and duration t >= 0.
    ///
    /// Dimension 2 uses the exact axis-angle closed form; larger dimensions
    /// go through the eigendecomposition, which keeps the result unitary to
    /// machine precision.
    pub fn mat_exp(&self, t: f64) -> Result<Operator> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Propagation(format!("invalid propagation time {t}")));
        }
        let herr = self.hermiticity_error();
        if herr > HERMITICITY_TOL {
            return Err(Error::NotHermitian { norm: herr });
        }
        if self.dim == 2 {
            let comps = pauli_components(self)?;
            let a0 = 0.5 * comps.identity;
            let beta = (comps.x * comps.x + comps.y * comps.y + comps.z * comps.z).sqrt();
            let global = C64::from_polar(1.0, -a0 * t);
            let mut out = Operator::zeros(2);
            if beta == 0.0 {
                out[(0, 0)] = global;
                out[(1, 1)] = global;
                return Ok(out);
            }
            let (cos_bt, sin_bt) = ((beta * t).cos(), (beta * t).sin());
            let f = C64::new(0.0, -sin_bt / beta);
            out[(0, 0)] = global * (C64::new(cos_bt, 0.0) + f * comps.z);
            out[(0, 1)] = global * f * C64::new(comps.x, -comps.y);
            out[(1, 0)] = global * f * C64::new(comps.x, comps.y);
            out[(1, 1)] = global * (C64::new(cos_bt, 0.0) - f * comps.z);
            return Ok(out);
        }
        let (evals, vecs) = self.eig_hermitian()?;
        let mut diag = Operator::zeros(self.dim);
        for (i, e) in evals.iter().enumerate() {
            diag[(i, i)] = C64::from_polar(1.0, -e * t);
        }
        Ok(vecs.mul(&diag).mul(&vecs.dagger()))
    }

    /// Square root of a positive semidefinite Hermitian matrix.
    ///
    /// Eigenvalues slightly below zero (>= -1e-9 relative) are clipped;
    /// anything more negative is rejected.
    pub fn sqrt_psd(&self) -> Result<Operator> {
        let (evals, vecs) = self.eig_hermitian()?;
        let scale = evals.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1e-300);
        let mut diag = Operator::zeros(self.dim);
        for (i, &e) in evals.iter().enumerate() {
            if e < -1e-9 * scale.max(1.0) {
                return Err(Error::NotPositive { eigenvalue: e });
            }
            diag[(i, i)] = C64::new(e.max(0.0).sqrt(), 0.0);
        }
        Ok(vecs.mul(&diag).mul(&vecs.dagger()))
    }
}

impl std::ops::Index<(usize, usize)> for Operator {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

pub fn sigma_x() -> Operator {
    Operator::from_rows(2, vec![
        C64::new(0.0, 0.0), C64::new(1.0, 0.0),
        C64::new(1.0, 0.0), C64::new(0.0, 0.0),
    ]).unwrap()
}

pub fn sigma_y() -> Operator {
    Operator::from_rows(2, vec![
        C64::new(0.0, 0.0), C64::new(0.0, -1.0),
        C64::new(0.0, 1.0), C64::new(0.0, 0.0),
    ]).unwrap()
}

pub fn sigma_z() -> Operator {
    Operator::from_rows(2, vec![
        C64::new(1.0, 0.0), C64::new(0.0, 0.0),
        C64::new(0.0, 0.0), C64::new(-1.0, 0.0),
    ]).unwrap()
}

/// Lowering operator |0><1| (relaxation toward the ground state |0>).
pub fn sigma_minus() -> Operator {
    Operator::from_rows(2, vec![
        C64::new(0.0, 0.0), C64::new(1.0, 0.0),
        C64::new(0.0, 0.0), C64::new(0.0, 0.0),
    ]).unwrap()
}

/// Pauli decomposition of a 2x2 Hermitian matrix.
///
/// `H = identity/2 * I + x sx + y sy + z sz`, with the identity coefficient
/// reported separately so the traceless part reconstructs exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliComponents {
    /// Coefficient of I/2, i.e. Tr H.
    pub identity: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PauliComponents {
    /// Drive vector (x, y, z) = Tr[H sigma_vec] / 2.
    pub fn vector(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn reassemble(&self) -> Operator {
        let mut h = Operator::zeros(2);
        h[(0, 0)] = C64::new(0.5 * self.identity + self.z, 0.0);
        h[(1, 1)] = C64::new(0.5 * self.identity - self.z, 0.0);
        h[(0, 1)] = C64::new(self.x, -self.y);
        h[(1, 0)] = C64::new(self.x, self.y);
        h
    }
}

/// Components (x, y, z) with H = Tr(H)/2 I + x sx + y sy + z sz.
pub fn pauli_components(h: &Operator) -> Result<PauliComponents> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: h.dim() });
    }
    let herr = h.hermiticity_error();
    if herr > HERMITICITY_TOL {
        return Err(Error::NotHermitian { norm: herr });
    }
    Ok(PauliComponents {
        identity: h.trace().re,
        x: h[(0, 1)].re,
        y: -h[(0, 1)].im,
        z: 0.5 * (h[(0, 0)].re - h[(1, 1)].re),
    })
}
