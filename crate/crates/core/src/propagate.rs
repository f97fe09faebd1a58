//! Time evolution engines.
//!
//! Unitary propagation steps piecewise-constant exponentials segment by
//! segment (substeps never straddle a segment boundary, so holds are exact).
//! Open-system propagation integrates the master equation
//! `drho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})`
//! with fixed-step 4th-order Runge-Kutta, per-qubit relaxation
//! `L = sqrt(1/T1) sigma_minus` and pure dephasing
//! `L = sqrt(1/(2 Tphi)) sigma_z` (tensor-extended for two qubits). The trace
//! is never renormalized; drift and positivity are tracked as diagnostics.

use num_complex::Complex64 as C64;

use crate::error::Error;
use crate::matrix::{sigma_minus, sigma_z, Operator};
use crate::path::{DrivenPath, PathModel};
use crate::state::{partial_trace, QuantumState};
use crate::waveform::{hamiltonian_steps, WaveformTrace};
use crate::Result;

/// Relaxation and dephasing times of one qubit. Infinite values switch the
/// corresponding channel off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitDecoherence {
    t1: f64,
    t2: f64,
}

impl QubitDecoherence {
    ///`t1 > 0` and `0 < t2 <= 2 t1`.
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1 > 0.0) || t1.is_nan() {
            return Err(Error::InvalidModel(format!("T1 must be positive, got {t1}")));
        }
        if !(t2 > 0.0) || t2.is_nan() || t2 > 2.0 * t1 {
            return Err(Error::InvalidModel(format!(
                "T2 must satisfy 0 < T2 <= 2 T1, got T2 = {t2}, T1 = {t1}"
            )));
        }
        Ok(QubitDecoherence { t1, t2 })
    }

    pub fn coherent() -> Self {
        QubitDecoherence { t1: f64::INFINITY, t2: f64::INFINITY }
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Pure-dephasing time: 1/Tphi = 1/T2 - 1/(2 T1); infinite when T2 = 2 T1.
    pub fn tphi(&self) -> f64 {
        let inv = 1.0 / self.t2 - 1.0 / (2.0 * self.t1);
        if inv <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / inv
        }
    }

    fn relaxation_rate(&self) -> f64 {
        if self.t1.is_finite() {
            1.0 / self.t1
        } else {
            0.0
        }
    }

    fn dephasing_rate(&self) -> f64 {
        let tphi = self.tphi();
        if tphi.is_finite() {
            0.5 / tphi
        } else {
            0.0
        }
    }
}

/// Decoherence model for the whole register (one or two qubits; tensor order
/// matches the basis labels |q3 q4>).
#[derive(Clone, Debug, PartialEq)]
pub struct DecoherenceParams {
    pub qubits: Vec<QubitDecoherence>,
}

impl DecoherenceParams {
    pub fn single(q: QubitDecoherence) -> Self {
        DecoherenceParams { qubits: vec![q] }
    }

    pub fn pair(first: QubitDecoherence, second: QubitDecoherence) -> Self {
        DecoherenceParams { qubits: vec![first, second] }
    }

    /// Collapse operators with rates folded in, extended to the full space.
    pub fn collapse_operators(&self, dim: usize) -> Result<Vec<Operator>> {
        let expected = 1 << self.qubits.len();
        if dim != expected {
            return Err(Error::DimensionMismatch { expected, got: dim });
        }
        let eye = Operator::identity(2);
        let mut out = Vec::new();
        for (pos, q) in self.qubits.iter().enumerate() {
            for (rate, op) in
                [(q.relaxation_rate(), sigma_minus()), (q.dephasing_rate(), sigma_z())]
            {
                if rate == 0.0 {
                    continue;
                }
                let scaled = op.scale_re(rate.sqrt());
                let full = match (self.qubits.len(), pos) {
                    (1, _) => scaled,
                    (2, 0) => scaled.kron(&eye),
                    (2, 1) => eye.kron(&scaled),
                    _ => {
                        return Err(Error::InvalidModel(
                            "only one- and two-qubit registers are supported".into(),
                        ))
                    }
                };
                out.push(full);
            }
        }
        Ok(out)
    }
}

/// Numerical health counters for one propagation run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PropagationDiagnostics {
    /// Unitary runs: max | ||psi|| - 1 | at recorded times.
    pub max_norm_drift: f64,
    /// Open-system runs: max |Tr rho - 1| over all steps.
    pub max_trace_drift: f64,
    /// Open-system runs: smallest eigenvalue seen at recorded times.
    pub min_eigenvalue: f64,
    pub steps: usize,
}

/// Recorded time evolution: strictly increasing times, one state per time.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    pub diagnostics: PropagationDiagnostics,
}

impl Trajectory {
    pub fn final_state(&self) -> &QuantumState {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// One piecewise-constant stretch: apply `h` for `count` steps of `dt`.
struct StepGroup {
    h: Operator,
    dt: f64,
    count: usize,
}

fn path_step_groups(path: &DrivenPath, dt: f64) -> Result<Vec<StepGroup>> {
    if !(dt > 0.0) {
        return Err(Error::Propagation(format!("step size must be positive, got {dt}")));
    }
    let mut groups = Vec::new();
    for seg in &path.schedule.segments {
        let n = (seg.duration / dt).ceil().max(1.0) as usize;
        let h_step = seg.duration / n as f64;
        if seg.is_hold() {
            groups.push(StepGroup {
                h: path.hamiltonian_at_lambda(seg.lambda_start)?,
                dt: h_step,
                count: n,
            });
        } else {
            for i in 0..n {
                let frac = (i as f64 + 0.5) / n as f64;
                let lam = seg.lambda_start + (seg.lambda_end - seg.lambda_start) * frac;
                groups.push(StepGroup {
                    h: path.hamiltonian_at_lambda(lam)?,
                    dt: h_step,
                    count: 1,
                });
            }
        }
    }
    Ok(groups)
}

fn trace_step_groups(
    trace: &WaveformTrace,
    model: PathModel,
    dt: f64,
) -> Result<Vec<StepGroup>> {
    if !(dt > 0.0) {
        return Err(Error::Propagation(format!("step size must be positive, got {dt}")));
    }
    let sample_dt = 1.0 / trace.sample_rate;
    let n = (sample_dt / dt).ceil().max(1.0) as usize;
    Ok(hamiltonian_steps(trace, model)?
        .into_iter()
        .map(|(h, dur)| StepGroup { h, dt: dur / n as f64, count: n })
        .collect())
}

fn record_stride(total_steps: usize) -> usize {
    (total_steps / 2048).max(1)
}

fn propagate_unitary_groups(
    groups: &[StepGroup],
    psi0: &QuantumState,
    dim: usize,
) -> Result<Trajectory> {
    let amps = psi0
        .amplitudes()
        .ok_or_else(|| Error::InvalidState("unitary propagation needs a pure state".into()))?;
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: psi0.dim() });
    }
    let factors = psi0.tensor_factors().to_vec();
    let total_steps: usize = groups.iter().map(|g| g.count).sum();
    let stride = record_stride(total_steps);

    let mut psi: Vec<C64> = amps.to_vec();
    let mut t = 0.0;
    let mut step_index = 0usize;
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let mut diag = PropagationDiagnostics { min_eigenvalue: 0.0, ..Default::default() };

    for g in groups {
        let u = g.h.mat_exp(g.dt)?;
        for _ in 0..g.count {
            psi = u.apply(&psi);
            t += g.dt;
            step_index += 1;
            if step_index % stride == 0 || step_index == total_steps {
                let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                diag.max_norm_drift = diag.max_norm_drift.max((norm - 1.0).abs());
                times.push(t);
                states.push(QuantumState::pure(psi.clone(), factors.clone())?);
            }
        }
    }
    diag.steps = total_steps;
    Ok(Trajectory { times, states, diagnostics: diag })
}

/// Unitary evolution of a pure state along a driven path.
pub fn propagate_unitary(path: &DrivenPath, psi0: &QuantumState, dt: f64) -> Result<Trajectory> {
    let groups = path_step_groups(path, dt)?;
    propagate_unitary_groups(&groups, psi0, path.dim())
}

/// Unitary evolution driven by a sampled waveform (one exact exponential per
/// sample).
pub fn propagate_unitary_trace(
    trace: &WaveformTrace,
    model: PathModel,
    psi0: &QuantumState,
) -> Result<Trajectory> {
    let groups = trace_step_groups(trace, model, 1.0 / trace.sample_rate)?;
    let dim = match model {
        PathModel::SingleQubit { .. } => 2,
        PathModel::TwoQubit { .. } => 4,
    };
    propagate_unitary_groups(&groups, psi0, dim)
}

struct LindbladContext {
    ls: Vec<(Operator, Operator, Operator)>, // (L, L^dag, L^dag L)
}

impl LindbladContext {
    fn new(dec: &DecoherenceParams, dim: usize) -> Result<Self> {
        let ls = dec
            .collapse_operators(dim)?
            .into_iter()
            .map(|l| {
                let ld = l.dagger();
                let ldl = ld.mul(&l);
                (l, ld, ldl)
            })
            .collect();
        Ok(LindbladContext { ls })
    }

    fn rhs(&self, h: &Operator, rho: &Operator) -> Operator {
        // -i [H, rho]
        let mut out = h.mul(rho).sub(&rho.mul(h)).scale(C64::new(0.0, -1.0));
        for (l, ld, ldl) in &self.ls {
            let lrl = l.mul(rho).mul(ld);
            out.add_scaled_assign(C64::new(1.0, 0.0), &lrl);
            out.add_scaled_assign(C64::new(-0.5, 0.0), &ldl.mul(rho));
            out.add_scaled_assign(C64::new(-0.5, 0.0), &rho.mul(ldl));
        }
        out
    }

    fn rk4_step(&self, h: &Operator, rho: &Operator, dt: f64) -> Operator {
        let k1 = self.rhs(h, rho);
        let mut tmp = rho.clone();
        tmp.add_scaled_assign(C64::new(0.5 * dt, 0.0), &k1);
        let k2 = self.rhs(h, &tmp);
        tmp = rho.clone();
        tmp.add_scaled_assign(C64::new(0.5 * dt, 0.0), &k2);
        let k3 = self.rhs(h, &tmp);
        tmp = rho.clone();
        tmp.add_scaled_assign(C64::new(dt, 0.0), &k3);
        let k4 = self.rhs(h, &tmp);

        let mut out = rho.clone();
        out.add_scaled_assign(C64::new(dt / 6.0, 0.0), &k1);
        out.add_scaled_assign(C64::new(dt / 3.0, 0.0), &k2);
        out.add_scaled_assign(C64::new(dt / 3.0, 0.0), &k3);
        out.add_scaled_assign(C64::new(dt / 6.0, 0.0), &k4);
        // project numerical asymmetry out; trace is left alone
        out.add(&out.dagger()).scale_re(0.5)
    }
}

const TRACE_DRIFT_PER_STEP: f64 = 1e-9;
const MAX_HALVINGS: u32 = 24;

fn propagate_lindblad_groups(
    groups: &[StepGroup],
    rho0: &QuantumState,
    dec: &DecoherenceParams,
    dim: usize,
) -> Result<Trajectory> {
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: rho0.dim() });
    }
    let ctx = LindbladContext::new(dec, dim)?;
    let factors = rho0.tensor_factors().to_vec();
    let total_steps: usize = groups.iter().map(|g| g.count).sum();
    let stride = record_stride(total_steps);

    let mut rho = rho0.density_matrix();
    let mut t = 0.0;
    let mut step_index = 0usize;
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut diag = PropagationDiagnostics::default();
    {
        let (evals, _) = rho.eig_hermitian()?;
        diag.min_eigenvalue = evals[0];
    }

    for g in groups {
        // adaptive halving: restart the group with a smaller substep when
        // the per-step trace drift exceeds budget
        let mut substeps = 1usize;
        let rho_group_start = rho.clone();
        let t_group_start = t;
        let step_group_start = step_index;
        let mut halvings = 0u32;
        'attempt: loop {
            rho = rho_group_start.clone();
            t = t_group_start;
            step_index = step_group_start;
            let mut pending: Vec<(f64, Operator)> = Vec::new();
            let sub_dt = g.dt / substeps as f64;
            for _ in 0..g.count {
                for _ in 0..substeps {
                    let before = rho.trace().re;
                    rho = ctx.rk4_step(&g.h, &rho, sub_dt);
                    let drift = (rho.trace().re - before).abs();
                    if drift > TRACE_DRIFT_PER_STEP {
                        halvings += 1;
                        if halvings > MAX_HALVINGS {
                            return Err(Error::Propagation(format!(
                                "step size did not converge: trace drift {drift:.3e} per step"
                            )));
                        }
                        substeps *= 2;
                        continue 'attempt;
                    }
                    diag.max_trace_drift =
                        diag.max_trace_drift.max((rho.trace().re - 1.0).abs());
                }
                t += g.dt;
                step_index += 1;
                if step_index % stride == 0 || step_index == total_steps {
                    pending.push((t, rho.clone()));
                }
            }
            // group succeeded: commit its snapshots
            for (time, snapshot) in pending {
                let (evals, _) = snapshot.eig_hermitian()?;
                diag.min_eigenvalue = diag.min_eigenvalue.min(evals[0]);
                // snapshots must satisfy the state invariants; surface
                // violations instead of silently normalizing
                times.push(time);
                states.push(QuantumState::density(snapshot, factors.clone())?);
            }
            break;
        }
    }
    diag.steps = total_steps;
    Ok(Trajectory { times, states, diagnostics: diag })
}

/// Open-system evolution of a density matrix along a driven path.
pub fn propagate_lindblad(
    path: &DrivenPath,
    rho0: &QuantumState,
    dec: &DecoherenceParams,
    dt: f64,
) -> Result<Trajectory> {
    let groups = path_step_groups(path, dt)?;
    propagate_lindblad_groups(&groups, rho0, dec, path.dim())
}

/// Open-system evolution driven by a sampled waveform.
pub fn propagate_lindblad_trace(
    trace: &WaveformTrace,
    model: PathModel,
    rho0: &QuantumState,
    dec: &DecoherenceParams,
    dt: f64,
) -> Result<Trajectory> {
    let groups = trace_step_groups(trace, model, dt)?;
    let dim = match model {
        PathModel::SingleQubit { .. } => 2,
        PathModel::TwoQubit { .. } => 4,
    };
    propagate_lindblad_groups(&groups, rho0, dec, dim)
}

/// Population transferred to a basis label at the end of a trajectory.
///
/// Two-qubit labels "01"/"10" reduce to the excited-state population of the
/// qubit marked 1 (tracing the other out); "00"/"11" and single-qubit "0"/"1"
/// are direct basis populations.
pub fn transferred_population(traj: &Trajectory, target: &str) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::InvalidState("empty trajectory".into()));
    }
    let state = traj.final_state();
    match (state.dim(), target) {
        (2, "0") => Ok(state.population(0)),
        (2, "1") => Ok(state.population(1)),
        (4, "01") => Ok(partial_trace(state, 1)?.population(1)),
        (4, "10") => Ok(partial_trace(state, 0)?.population(1)),
        (4, "00") => Ok(state.population(0)),
        (4, "11") => Ok(state.population(3)),
        (dim, label) => Err(Error::InvalidState(format!(
            "population label `{label}` does not apply to dimension {dim}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use crate::path::PathModel;
    use crate::schedule::{iswap_schedule, jumping_schedule, PathKind};
    use crate::state::{bloch_vector, fidelity};
    use crate::units::{mhz, ns, us};
    use crate::waveform::{Channel, WaveformTrace};
    use std::f64::consts::PI;

    fn zero_trace_1q(samples: usize) -> WaveformTrace {
        WaveformTrace {
            sample_rate: 1e9,
            channels: vec![
                Channel { name: "omega_x".into(), samples: vec![0.0; samples] },
                Channel { name: "omega_y".into(), samples: vec![0.0; samples] },
                Channel { name: "omega_z".into(), samples: vec![0.0; samples] },
            ],
        }
    }

    fn latitude_path(gamma: f64, t_ns: f64, omega0_mhz: f64) -> DrivenPath {
        let s = jumping_schedule(-PI, 0.0, 5, gamma, ns(t_ns), PathKind::Latitude).unwrap();
        DrivenPath::new(s, PathModel::SingleQubit { omega0: mhz(omega0_mhz) }).unwrap()
    }

    fn plus_x() -> QuantumState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        QuantumState::pure(vec![C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).unwrap()
    }

    fn minus_x() -> QuantumState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        QuantumState::pure(vec![C64::new(s, 0.0), C64::new(-s, 0.0)], vec![2]).unwrap()
    }

    #[test]
    fn zero_hamiltonian_leaves_state_unchanged() {
        let trace = zero_trace_1q(100);
        let psi0 = plus_x();
        let traj =
            propagate_unitary_trace(&trace, PathModel::SingleQubit { omega0: mhz(1.0) }, &psi0)
                .unwrap();
        assert!((fidelity(&psi0, traj.final_state()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn latitude_jump_run_matches_segment_product_oracle() {
        let path = latitude_path(1.0, 250.0, 10.0);
        let traj = propagate_unitary(&path, &plus_x(), ns(0.1)).unwrap();
        let f = fidelity(&minus_x(), traj.final_state()).unwrap();
        assert!(f >= 0.999, "fidelity {f}");
        assert!(traj.diagnostics.max_norm_drift < 1e-9);

        // independent oracle: product of five closed-form segment
        // exponentials applied to the initial amplitudes
        let omega0 = mhz(10.0);
        let tau = 50e-9;
        let mut psi = [
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ];
        for k in 0..5 {
            let phi = -PI + PI * (2.0 * k as f64 + 1.0) / 10.0;
            // U = cos(b t) I - i sin(b t) (cos phi sx + sin phi sy), b = omega0/2
            let bt = 0.5 * omega0 * tau;
            let (c, s) = (bt.cos(), bt.sin());
            let off01 = C64::new(0.0, -s) * C64::new(phi.cos(), -phi.sin());
            let off10 = C64::new(0.0, -s) * C64::new(phi.cos(), phi.sin());
            let a = C64::new(c, 0.0) * psi[0] + off01 * psi[1];
            let b = off10 * psi[0] + C64::new(c, 0.0) * psi[1];
            psi = [a, b];
        }
        let oracle = QuantumState::pure(psi.to_vec(), vec![2]).unwrap();
        let agree = fidelity(&oracle, traj.final_state()).unwrap();
        assert!((agree - 1.0).abs() < 1e-9, "oracle agreement {agree}");
    }

    #[test]
    fn iswap_rabi_closed_form() {
        let j = mhz(9.2);
        let psi10 = QuantumState::two_qubit_basis(1, 0);
        for (t_factor, expect) in [(0.5, 1.0), (0.25, 0.5)] {
            let t = t_factor * PI / j;
            let s = iswap_schedule(j, t).unwrap();
            let p = DrivenPath::new(s, PathModel::TwoQubit { j }).unwrap();
            let traj = propagate_unitary(&p, &psi10, ns(0.1)).unwrap();
            let pop = transferred_population(&traj, "01").unwrap();
            assert!((pop - expect).abs() < 1e-6, "pop {pop} vs {expect}");
            // Rabi oracle sin^2(J t)
            assert!((pop - (j * t).sin().powi(2)).abs() < 1e-6);
        }
        // zero-duration hold: no transfer
        let s = iswap_schedule(j, 0.0).unwrap();
        let p = DrivenPath::new(s, PathModel::TwoQubit { j }).unwrap();
        let traj = propagate_unitary(&p, &psi10, ns(0.1)).unwrap();
        assert!(transferred_population(&traj, "01").unwrap() < 1e-12);
    }

    #[test]
    fn relaxation_only_decay_matches_exponential() {
        let trace = zero_trace_1q(500);
        let t1 = us(2.0);
        let dec = DecoherenceParams::single(QubitDecoherence::new(t1, 2.0 * t1).unwrap());
        let rho0 = QuantumState::density(
            QuantumState::qubit_basis(1).density_matrix(),
            vec![2],
        )
        .unwrap();
        let traj = propagate_lindblad_trace(
            &trace,
            PathModel::SingleQubit { omega0: mhz(1.0) },
            &rho0,
            &dec,
            ns(0.1),
        )
        .unwrap();
        let t = traj.final_time();
        let expect = (-t / t1).exp();
        let got = traj.final_state().population(1);
        assert!(((got - expect) / expect).abs() < 1e-6, "got {got}, expect {expect}");
        assert!(traj.diagnostics.max_trace_drift < 1e-9);
        assert!(traj.diagnostics.min_eigenvalue > -1e-7);
    }

    #[test]
    fn pure_dephasing_decay_of_coherence() {
        let trace = zero_trace_1q(500);
        let tphi = us(1.0);
        // T1 infinite: 1/Tphi = 1/T2
        let dec =
            DecoherenceParams::single(QubitDecoherence::new(f64::INFINITY, tphi).unwrap());
        let rho0 = QuantumState::density(plus_x().density_matrix(), vec![2]).unwrap();
        let traj = propagate_lindblad_trace(
            &trace,
            PathModel::SingleQubit { omega0: mhz(1.0) },
            &rho0,
            &dec,
            ns(0.1),
        )
        .unwrap();
        let t = traj.final_time();
        let x = bloch_vector(traj.final_state()).unwrap()[0];
        let expect = (-t / tphi).exp();
        assert!(((x - expect) / expect).abs() < 1e-6, "x {x}, expect {expect}");
    }

    #[test]
    fn zero_rate_lindblad_agrees_with_unitary() {
        let path = latitude_path(1.0, 250.0, 10.0);
        let psi0 = plus_x();
        let unitary = propagate_unitary(&path, &psi0, ns(0.1)).unwrap();
        let dec = DecoherenceParams::single(QubitDecoherence::coherent());
        let rho0 = QuantumState::density(psi0.density_matrix(), vec![2]).unwrap();
        let open = propagate_lindblad(&path, &rho0, &dec, ns(0.1)).unwrap();
        let f = fidelity(unitary.final_state(), open.final_state()).unwrap();
        assert!((f - 1.0).abs() < 1e-8, "fidelity {f}");
    }

    #[test]
    fn lindblad_step_halving_converges() {
        let path = latitude_path(1.0, 250.0, 10.0);
        let dec = DecoherenceParams::single(
            QubitDecoherence::new(us(26.4), us(45.4)).unwrap(),
        );
        let rho0 = QuantumState::density(plus_x().density_matrix(), vec![2]).unwrap();
        let coarse = propagate_lindblad(&path, &rho0, &dec, ns(0.1)).unwrap();
        let fine = propagate_lindblad(&path, &rho0, &dec, ns(0.05)).unwrap();
        let target = minus_x();
        let fc = fidelity(&target, coarse.final_state()).unwrap();
        let ff = fidelity(&target, fine.final_state()).unwrap();
        assert!((fc - ff).abs() < 1e-6, "dt sensitivity {}", (fc - ff).abs());
    }

    #[test]
    fn transferred_population_labels() {
        let psi01 = QuantumState::two_qubit_basis(0, 1);
        let traj = Trajectory {
            times: vec![0.0],
            states: vec![psi01],
            diagnostics: PropagationDiagnostics::default(),
        };
        assert!((transferred_population(&traj, "01").unwrap() - 1.0).abs() < 1e-12);
        assert!(transferred_population(&traj, "10").unwrap() < 1e-12);
        assert!(transferred_population(&traj, "xx").is_err());
    }

    #[test]
    fn decoherence_parameter_validation() {
        assert!(QubitDecoherence::new(0.0, 1.0).is_err());
        assert!(QubitDecoherence::new(1.0, 2.5).is_err());
        assert!(QubitDecoherence::new(1.0, -1.0).is_err());
        let q = QubitDecoherence::new(us(20.0), us(4.5)).unwrap();
        let inv_tphi = 1.0 / us(4.5) - 1.0 / (2.0 * us(20.0));
        assert!((q.tphi() - 1.0 / inv_tphi).abs() < 1e-9);
        // no dephasing at the T2 = 2 T1 boundary
        let pure_relax = QubitDecoherence::new(us(20.0), us(40.0)).unwrap();
        assert!(pure_relax.tphi().is_infinite());
    }

    #[test]
    fn rejects_bad_dt_and_mixed_state_unitary() {
        let path = latitude_path(1.0, 250.0, 10.0);
        assert!(propagate_unitary(&path, &plus_x(), 0.0).is_err());
        let mixed = QuantumState::maximally_mixed(2, vec![2]).unwrap();
        assert!(propagate_unitary(&path, &mixed, ns(0.1)).is_err());
    }

    #[test]
    fn two_qubit_collapse_operators_are_tensor_extended() {
        let dec = DecoherenceParams::pair(
            QubitDecoherence::new(us(13.4), us(10.8)).unwrap(),
            QubitDecoherence::new(us(22.1), us(4.5)).unwrap(),
        );
        let ops = dec.collapse_operators(4).unwrap();
        assert_eq!(ops.len(), 4);
        // first qubit relaxation acts on the first tensor slot:
        // |10> -> |00| entry at (0, 2)
        let rate = (1.0f64 / us(13.4)).sqrt();
        assert!((ops[0][(0, 2)].re - rate).abs() < 1e-9);
        assert!(ops[0][(0, 1)].norm() < 1e-12);
        // second qubit relaxation: |01> -> |00> entry at (0, 1)
        let rate4 = (1.0f64 / us(22.1)).sqrt();
        assert!((ops[2][(0, 1)].re - rate4).abs() < 1e-9);
    }

    #[test]
    fn snac_two_qubit_unitary_transfer_is_complete() {
        let j = mhz(9.2);
        let sched = crate::schedule::pi_phase_schedule(
            0.0,
            PI,
            5,
            PathKind::TwoQubitVarphi,
            |phi| 2.0 * j / phi.sin(),
        )
        .unwrap();
        let path = DrivenPath::new(sched, PathModel::TwoQubit { j }).unwrap();
        let traj = propagate_unitary(&path, &QuantumState::two_qubit_basis(1, 0), ns(0.1)).unwrap();
        let pop = transferred_population(&traj, "01").unwrap();
        assert!(pop > 0.9999, "pop {pop}");
    }

    #[test]
    fn lindblad_two_qubit_preserves_invariants() {
        let j = mhz(9.2);
        let d0 = mhz(230.7);
        let sched = crate::schedule::lzt_schedule(d0, -d0, ns(88.0), 200).unwrap();
        let path = DrivenPath::new(sched, PathModel::TwoQubit { j }).unwrap();
        let dec = DecoherenceParams::pair(
            QubitDecoherence::new(us(13.4), us(10.8)).unwrap(),
            QubitDecoherence::new(us(22.1), us(4.5)).unwrap(),
        );
        let rho0 = QuantumState::density(
            QuantumState::two_qubit_basis(1, 0).density_matrix(),
            vec![2, 2],
        )
        .unwrap();
        let traj = propagate_lindblad(&path, &rho0, &dec, ns(0.1)).unwrap();
        assert!(traj.diagnostics.max_trace_drift < 1e-9);
        assert!(traj.diagnostics.min_eigenvalue > -1e-7);
        let _ = model::avoided_crossing_gap(d0, j).unwrap();
    }
}
