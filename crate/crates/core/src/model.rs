//! Effective rotating-frame Hamiltonians for the driven single qubit and the
//! coupled qubit pair, with the mappings between laboratory parameters
//! (detuning, drive amplitude, coupling) and the abstract (gap, angle)
//! parameterization.

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::Error;
use crate::matrix::Operator;
use crate::state::QuantumState;
use crate::units;
use crate::Result;

/// Parameters of the driven single qubit in the rotating frame.
///
/// `omega0 = sqrt(delta^2 + omega^2)` is the gap, `theta = atan2(omega,
/// delta)` the mixing angle, `phi` the drive phase. All rad/s and rad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitParams {
    pub omega0: f64,
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
    pub omega: f64,
}

/// Mapping from detuning and drive amplitude to gap and mixing angle.
pub fn single_qubit_params(delta: f64, omega: f64) -> Result<SingleQubitParams> {
    if delta == 0.0 && omega == 0.0 {
        return Err(Error::InvalidModel("detuning and drive amplitude both zero".into()));
    }
    Ok(SingleQubitParams {
        omega0: (delta * delta + omega * omega).sqrt(),
        theta: omega.atan2(delta),
        phi: 0.0,
        delta,
        omega,
    })
}

impl SingleQubitParams {
    /// Construct directly from gap and angles; lab parameters are recovered
    /// as `delta = omega0 cos(theta)`, `omega = omega0 sin(theta)`.
    pub fn from_angles(omega0: f64, theta: f64, phi: f64) -> Result<Self> {
        if omega0 <= 0.0 {
            return Err(Error::InvalidModel(format!("gap must be positive, got {omega0}")));
        }
        Ok(SingleQubitParams {
            omega0,
            theta,
            phi,
            delta: omega0 * theta.cos(),
            omega: omega0 * theta.sin(),
        })
    }
}

/// Single-qubit rotating-frame Hamiltonian
/// `(omega0/2) [[cos th, sin th e^{-i phi}], [sin th e^{i phi}, -cos th]]`.
pub fn h1_build(p: &SingleQubitParams) -> Result<Operator> {
    if p.omega0 <= 0.0 {
        return Err(Error::InvalidModel(format!("gap must be positive, got {}", p.omega0)));
    }
    let half = 0.5 * p.omega0;
    let (st, ct) = p.theta.sin_cos();
    let off = C64::from_polar(half * st, -p.phi);
    Operator::from_rows(2, vec![
        C64::new(half * ct, 0.0), off,
        off.conj(), C64::new(-half * ct, 0.0),
    ])
}

/// Instantaneous eigenstates of the single-qubit Hamiltonian:
/// `psi_plus = cos(th/2)|0> + sin(th/2) e^{i phi}|1>` (eigenvalue +omega0/2),
/// `psi_minus = sin(th/2)|0> - cos(th/2) e^{i phi}|1>` (eigenvalue -omega0/2).
pub fn h1_eigenstates(theta: f64, phi: f64) -> (QuantumState, QuantumState) {
    let (s, c) = (0.5 * theta).sin_cos();
    let phase = C64::from_polar(1.0, phi);
    let plus = QuantumState::pure(vec![C64::new(c, 0.0), phase * s], vec![2])
        .expect("closed-form eigenstate is normalized");
    let minus = QuantumState::pure(vec![C64::new(s, 0.0), -phase * c], vec![2])
        .expect("closed-form eigenstate is normalized");
    (plus, minus)
}

/// Parameters of the coupled qubit pair in the single-excitation subspace.
///
/// `j0 = sqrt(delta^2/4 + j^2)` is the effective gap and `varphi` the mixing
/// angle, fixed to the branch (0, pi) so the adiabatic path |10> -> |01> is
/// continuous and monotone as `delta` sweeps from +inf to -inf.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitParams {
    pub j: f64,
    pub delta: f64,
    pub j0: f64,
    pub varphi: f64,
}

/// Mapping from qubit-qubit detuning and static coupling to the effective
/// gap and mixing angle.
pub fn two_qubit_params(delta: f64, j: f64) -> Result<TwoQubitParams> {
    if j <= 0.0 {
        return Err(Error::InvalidModel(format!("coupling must be positive, got {j}")));
    }
    Ok(TwoQubitParams {
        j,
        delta,
        j0: (0.25 * delta * delta + j * j).sqrt(),
        varphi: (2.0 * j).atan2(delta),
    })
}

/// Inverse of the angle map: detuning producing a given mixing angle.
pub fn delta_for_varphi(varphi: f64, j: f64) -> f64 {
    2.0 * j * varphi.cos() / varphi.sin()
}

/// Two-qubit rotating-frame Hamiltonian in the basis {|00>, |01>, |10>, |11>}:
/// zero outside the single-excitation block, `J0 [[cos vphi, sin vphi], [sin
/// vphi, -cos vphi]]` inside it.
pub fn h2_build(p: &TwoQubitParams) -> Result<Operator> {
    if p.j <= 0.0 {
        return Err(Error::InvalidModel(format!("coupling must be positive, got {}", p.j)));
    }
    let mut h = Operator::zeros(4);
    let (s, c) = p.varphi.sin_cos();
    h[(1, 1)] = C64::new(p.j0 * c, 0.0);
    h[(2, 2)] = C64::new(-p.j0 * c, 0.0);
    h[(1, 2)] = C64::new(p.j0 * s, 0.0);
    h[(2, 1)] = C64::new(p.j0 * s, 0.0);
    Ok(h)
}

/// Same Hamiltonian built directly from the lab parameters: the block is
/// `[[delta/2, J], [J, -delta/2]]`, exact in floating point.
pub fn h2_from_delta(delta: f64, j: f64) -> Result<Operator> {
    if j <= 0.0 {
        return Err(Error::InvalidModel(format!("coupling must be positive, got {j}")));
    }
    let mut h = Operator::zeros(4);
    h[(1, 1)] = C64::new(0.5 * delta, 0.0);
    h[(2, 2)] = C64::new(-0.5 * delta, 0.0);
    h[(1, 2)] = C64::new(j, 0.0);
    h[(2, 1)] = C64::new(j, 0.0);
    Ok(h)
}

/// Eigenstates of the single-excitation block:
/// `E_plus = cos(vphi/2)|01> + sin(vphi/2)|10>`,
/// `E_minus = sin(vphi/2)|01> - cos(vphi/2)|10>`.
pub fn h2_eigenstates(varphi: f64) -> (QuantumState, QuantumState) {
    let (s, c) = (0.5 * varphi).sin_cos();
    let zero = C64::new(0.0, 0.0);
    let plus = QuantumState::pure(vec![zero, C64::new(c, 0.0), C64::new(s, 0.0), zero], vec![2, 2])
        .expect("closed-form eigenstate is normalized");
    let minus = QuantumState::pure(vec![zero, C64::new(s, 0.0), C64::new(-c, 0.0), zero], vec![2, 2])
        .expect("closed-form eigenstate is normalized");
    (plus, minus)
}

/// Avoided-crossing gap `2 J0 = sqrt(4 J^2 + delta^2)`, minimum 2J at zero
/// detuning.
pub fn avoided_crossing_gap(delta: f64, j: f64) -> Result<f64> {
    if j <= 0.0 {
        return Err(Error::InvalidModel(format!("coupling must be positive, got {j}")));
    }
    Ok((4.0 * j * j + delta * delta).sqrt())
}

/// Calibration data for one qubit at one bias spot.
#[derive(Clone, Debug, Deserialize)]
pub struct QubitCalibration {
    pub label: String,
    /// |0> -> |1> transition frequency, GHz linear.
    pub omega_q_ghz: f64,
    /// Anharmonicity, GHz linear.
    pub alpha_ghz: f64,
    /// Energy relaxation time, us.
    pub t1_us: f64,
    /// Ramsey dephasing time, us; absent where not measured.
    pub t2_us: Option<f64>,
}

impl QubitCalibration {
    pub fn omega_q(&self) -> f64 {
        units::ghz(self.omega_q_ghz)
    }

    pub fn alpha(&self) -> f64 {
        units::ghz(self.alpha_ghz)
    }

    pub fn t1(&self) -> f64 {
        units::us(self.t1_us)
    }

    pub fn t2(&self) -> Option<f64> {
        self.t2_us.map(units::us)
    }
}

/// Device calibration table, loadable from TOML.
#[derive(Clone, Debug, Deserialize)]
pub struct DeviceParams {
    pub qubits: Vec<QubitCalibration>,
}

/// Bundled calibration for the transmon pair used by the built-in scenarios.
/// Readout-resonator figures are omitted; they do not enter the dynamics.
const BUNDLED_DEVICE: &str = r#"
[[qubits]]
label = "q3-working"
omega_q_ghz = 4.9559
alpha_ghz = -0.286
t1_us = 13.4
t2_us = 10.8

[[qubits]]
label = "q4-working"
omega_q_ghz = 5.1866
alpha_ghz = -0.268
t1_us = 22.1
# t2 not measured at this spot; scenarios supply a per-run value

[[qubits]]
label = "q4-sweet"
omega_q_ghz = 5.8428
alpha_ghz = -0.268
t1_us = 26.4
t2_us = 45.4
"#;

impl DeviceParams {
    pub fn from_toml(text: &str) -> Result<Self> {
        let parsed: DeviceParams =
            toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        parsed.validate()?;
        Ok(parsed)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn bundled() -> Self {
        Self::from_toml(BUNDLED_DEVICE).expect("bundled device table is valid")
    }

    pub fn get(&self, label: &str) -> Option<&QubitCalibration> {
        self.qubits.iter().find(|q| q.label == label)
    }

    /// Physicality checks: positive times and T2 <= 2 T1 where T2 is known.
    pub fn validate(&self) -> Result<()> {
        for q in &self.qubits {
            if q.t1_us <= 0.0 {
                return Err(Error::InvalidModel(format!("{}: T1 must be positive", q.label)));
            }
            if let Some(t2) = q.t2_us {
                if t2 <= 0.0 || t2 > 2.0 * q.t1_us + 1e-12 {
                    return Err(Error::InvalidModel(format!(
                        "{}: T2 = {t2} us violates 0 < T2 <= 2 T1 (T1 = {} us)",
                        q.label, q.t1_us
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::fidelity;
    use crate::units::mhz;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn h1_theta_zero_is_diagonal() {
        let p = SingleQubitParams::from_angles(mhz(10.0), 0.0, 0.0).unwrap();
        let h = h1_build(&p).unwrap();
        assert!((h[(0, 0)].re - 0.5 * mhz(10.0)).abs() < 1e-6);
        assert!((h[(1, 1)].re + 0.5 * mhz(10.0)).abs() < 1e-6);
        assert!(h[(0, 1)].norm() < 1e-9);
    }

    #[test]
    fn h1_theta_half_pi_is_sigma_x() {
        let p = SingleQubitParams::from_angles(2.0, PI / 2.0, 0.0).unwrap();
        let h = h1_build(&p).unwrap();
        assert!((h[(0, 1)].re - 1.0).abs() < 1e-15);
        assert!(h[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn h1_eigensystem_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let omega0 = rng.random_range(0.1..5.0);
            let theta = rng.random_range(-PI..PI);
            let phi = rng.random_range(-PI..PI);
            let p = SingleQubitParams::from_angles(omega0, theta, phi).unwrap();
            let h = h1_build(&p).unwrap();
            let (evals, vecs) = h.eig_hermitian().unwrap();
            assert!((evals[0] + 0.5 * omega0).abs() < 1e-10 * omega0.max(1.0));
            assert!((evals[1] - 0.5 * omega0).abs() < 1e-10 * omega0.max(1.0));
            let (plus, minus) = h1_eigenstates(theta, phi);
            // overlap up to global phase
            let pa = plus.amplitudes().unwrap();
            let ma = minus.amplitudes().unwrap();
            let ovl_plus = (vecs[(0, 1)].conj() * pa[0] + vecs[(1, 1)].conj() * pa[1]).norm();
            let ovl_minus = (vecs[(0, 0)].conj() * ma[0] + vecs[(1, 0)].conj() * ma[1]).norm();
            assert!((ovl_plus - 1.0).abs() < 1e-10);
            assert!((ovl_minus - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn h1_trace_and_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let omega0 = rng.random_range(0.1..5.0);
            let p = SingleQubitParams::from_angles(
                omega0,
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
            )
            .unwrap();
            let h = h1_build(&p).unwrap();
            assert!(h.trace().norm() < 1e-12 * omega0);
            let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
            assert!((det + 0.25 * omega0 * omega0).abs() < 1e-10 * omega0 * omega0);
        }
    }

    #[test]
    fn eigenstate_pair_for_reference_transfers() {
        // start of the latitude path: theta = pi/2, phi = -pi is |+x>
        let (_, minus) = h1_eigenstates(PI / 2.0, -PI);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let px = QuantumState::pure(vec![C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).unwrap();
        assert!((fidelity(&minus, &px).unwrap() - 1.0).abs() < 1e-12);
        // start of the longitude path: theta = -pi, phi = 0 is |+z> up to phase
        let (_, minus_lon) = h1_eigenstates(-PI, 0.0);
        let pz = QuantumState::qubit_basis(0);
        assert!((fidelity(&minus_lon, &pz).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenstates_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let theta = rng.random_range(-PI..PI);
            let phi = rng.random_range(-PI..PI);
            let (plus, minus) = h1_eigenstates(theta, phi);
            let p = plus.amplitudes().unwrap();
            let m = minus.amplitudes().unwrap();
            let ip = p[0].conj() * m[0] + p[1].conj() * m[1];
            assert!(ip.norm() < 1e-14);
        }
    }

    #[test]
    fn single_qubit_params_limits() {
        let p = single_qubit_params(0.0, mhz(10.0)).unwrap();
        assert!((p.theta - PI / 2.0).abs() < 1e-14);
        assert!((p.omega0 - mhz(10.0)).abs() < 1e-6);
        let q = single_qubit_params(mhz(5.0), 0.0).unwrap();
        assert!(q.theta.abs() < 1e-14);
        assert!((q.omega0 - mhz(5.0)).abs() < 1e-6);
        assert!(single_qubit_params(0.0, 0.0).is_err());
    }

    #[test]
    fn single_qubit_gap_matches_eigensplit() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..50 {
            let delta = rng.random_range(-3.0..3.0);
            let omega = rng.random_range(0.01..3.0);
            let p = single_qubit_params(delta, omega).unwrap();
            let mut full = p;
            full.phi = rng.random_range(-PI..PI);
            let h = h1_build(&full).unwrap();
            let (evals, _) = h.eig_hermitian().unwrap();
            let gap = evals[1] - evals[0];
            let expect = (delta * delta + omega * omega).sqrt();
            assert!((gap - expect).abs() < 1e-10 * expect.max(1.0));
        }
    }

    #[test]
    fn two_qubit_params_branch() {
        let j = mhz(9.2);
        // delta -> +inf limit: varphi -> 0+
        let far = two_qubit_params(mhz(1e6), j).unwrap();
        assert!(far.varphi > 0.0 && far.varphi < 1e-4);
        // resonance
        let res = two_qubit_params(0.0, j).unwrap();
        assert!((res.varphi - PI / 2.0).abs() < 1e-14);
        assert!((res.j0 - j).abs() < 1e-9);
        // reflection property and monotonicity
        let mut prev = f64::INFINITY;
        for k in -10..=10 {
            let delta = mhz(25.0 * k as f64);
            let p = two_qubit_params(delta, j).unwrap();
            assert!(p.varphi > 0.0 && p.varphi < PI);
            assert!(p.varphi < prev);
            prev = p.varphi;
            let refl = two_qubit_params(-delta, j).unwrap();
            assert!((refl.varphi - (PI - p.varphi)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_qubit_params_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let j = mhz(9.2);
        for _ in 0..100 {
            let delta: f64 = rng.random_range(-500.0..500.0) * 1e6;
            if delta.abs() < 1e3 {
                continue;
            }
            let p = two_qubit_params(delta, j).unwrap();
            let back = delta_for_varphi(p.varphi, j);
            assert!(
                ((back - delta) / delta).abs() < 1e-9,
                "delta {delta} roundtripped to {back}"
            );
        }
    }

    #[test]
    fn reference_two_qubit_point() {
        // J/2pi = 9.2 MHz, delta/2pi = 230.7 MHz
        let p = two_qubit_params(mhz(230.7), mhz(9.2)).unwrap();
        let j0_mhz = crate::units::rad_to_mhz(p.j0);
        // direct formula: sqrt(115.35^2 + 9.2^2)
        let expect = (115.35f64 * 115.35 + 9.2 * 9.2).sqrt();
        assert!((j0_mhz - expect).abs() < 1e-9, "j0 {j0_mhz} vs {expect}");
        assert!((j0_mhz - 115.72).abs() < 5e-3);
        assert!((p.varphi - 0.0796).abs() < 1e-4);
    }

    #[test]
    fn h2_matches_delta_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let j = mhz(9.2);
        for _ in 0..50 {
            let delta = rng.random_range(-400.0..400.0) * 1e6;
            let p = two_qubit_params(delta, j).unwrap();
            let a = h2_build(&p).unwrap();
            let b = h2_from_delta(delta, j).unwrap();
            for i in 0..4 {
                for k in 0..4 {
                    assert!((a[(i, k)] - b[(i, k)]).norm() < 1e-6 * p.j0);
                }
            }
        }
    }

    #[test]
    fn h2_annihilates_unexcited_states() {
        let p = two_qubit_params(mhz(100.0), mhz(9.2)).unwrap();
        let h = h2_build(&p).unwrap();
        for k in 0..4 {
            assert!(h[(0, k)].norm() == 0.0 && h[(k, 0)].norm() == 0.0);
            assert!(h[(3, k)].norm() == 0.0 && h[(k, 3)].norm() == 0.0);
        }
    }

    #[test]
    fn h2_resonant_eigenstates() {
        let p = two_qubit_params(0.0, mhz(9.2)).unwrap();
        let h = h2_build(&p).unwrap();
        let (evals, _) = h.eig_hermitian().unwrap();
        assert!((evals[0] + p.j0).abs() < 1e-3);
        assert!((evals[3] - p.j0).abs() < 1e-3);
        let (plus, minus) = h2_eigenstates(p.varphi);
        let hp = h.apply(plus.amplitudes().unwrap());
        let hm = h.apply(minus.amplitudes().unwrap());
        for k in 0..4 {
            let pk = plus.amplitudes().unwrap()[k];
            let mk = minus.amplitudes().unwrap()[k];
            assert!((hp[k] - pk * p.j0).norm() < 1e-6);
            assert!((hm[k] + mk * p.j0).norm() < 1e-6);
        }
    }

    #[test]
    fn h2_eigenvectors_match_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let j = mhz(9.2);
        for _ in 0..100 {
            let delta = rng.random_range(-300.0..300.0) * 1e6;
            let p = two_qubit_params(delta, j).unwrap();
            let h = h2_build(&p).unwrap();
            let (evals, vecs) = h.eig_hermitian().unwrap();
            assert!((evals[0] + p.j0).abs() < 1e-10 * p.j0.max(1.0));
            assert!((evals[3] - p.j0).abs() < 1e-10 * p.j0.max(1.0));
            let (plus, minus) = h2_eigenstates(p.varphi);
            let pa = plus.amplitudes().unwrap();
            let ma = minus.amplitudes().unwrap();
            let mut ovl_p = C64::new(0.0, 0.0);
            let mut ovl_m = C64::new(0.0, 0.0);
            for k in 0..4 {
                ovl_p += vecs[(k, 3)].conj() * pa[k];
                ovl_m += vecs[(k, 0)].conj() * ma[k];
            }
            assert!((ovl_p.norm() - 1.0).abs() < 1e-10);
            assert!((ovl_m.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn gap_reference_and_asymptote() {
        let j = mhz(9.2);
        let gap = avoided_crossing_gap(0.0, j).unwrap();
        assert!((crate::units::rad_to_mhz(gap) - 18.4).abs() < 1e-9);
        let big = mhz(2000.0);
        let g = avoided_crossing_gap(big, j).unwrap();
        let rel = (g - big) / big;
        assert!(rel < (2.0 * j / big).powi(2) / 2.0 + 1e-12);
        assert!(rel > 0.0);
    }

    #[test]
    fn gap_matches_eigensplit_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let j = mhz(9.2);
        for _ in 0..100 {
            let delta = rng.random_range(-500.0..500.0) * 1e6;
            let h = h2_from_delta(delta, j).unwrap();
            let (evals, _) = h.eig_hermitian().unwrap();
            let split = evals[3] - evals[0];
            let gap = avoided_crossing_gap(delta, j).unwrap();
            assert!((split - gap).abs() < 1e-10 * gap);
        }
    }

    #[test]
    fn bundled_device_loads_and_validates() {
        let dev = DeviceParams::bundled();
        assert_eq!(dev.qubits.len(), 3);
        let q4 = dev.get("q4-sweet").unwrap();
        assert!((q4.omega_q_ghz - 5.8428).abs() < 1e-12);
        assert!((q4.t1_us - 26.4).abs() < 1e-12);
        assert_eq!(q4.t2_us, Some(45.4));
        let q4w = dev.get("q4-working").unwrap();
        assert!((q4w.omega_q_ghz - 5.1866).abs() < 1e-12);
        assert!(q4w.t2_us.is_none());
        let q3 = dev.get("q3-working").unwrap();
        assert!((q3.alpha_ghz + 0.286).abs() < 1e-12);
        dev.validate().unwrap();
    }

    #[test]
    fn device_rejects_unphysical_t2() {
        let bad = r#"
[[qubits]]
label = "q"
omega_q_ghz = 5.0
alpha_ghz = -0.3
t1_us = 10.0
t2_us = 25.0
"#;
        assert!(DeviceParams::from_toml(bad).is_err());
    }
}
