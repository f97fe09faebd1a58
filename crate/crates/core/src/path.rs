//! Binding of a control schedule to a physical model: given the schedule's
//! lambda(t) and the drive parameters, produce the instantaneous Hamiltonian
//! and eigenenergy gap.

use std::f64::consts::FRAC_PI_2;

use crate::error::Error;
use crate::matrix::Operator;
use crate::model;
use crate::schedule::{PathKind, PathSchedule};
use crate::Result;

/// Physical context for a path: the single-qubit gap or the pair coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathModel {
    /// Fixed gap omega0 (rad/s); lambda is an angle.
    SingleQubit { omega0: f64 },
    /// Static coupling j (rad/s); lambda is varphi or a detuning.
    TwoQubit { j: f64 },
}

#[derive(Clone, Debug)]
pub struct DrivenPath {
    pub schedule: PathSchedule,
    pub model: PathModel,
}

impl DrivenPath {
    pub fn new(schedule: PathSchedule, model: PathModel) -> Result<Self> {
        match (schedule.kind, model) {
            (PathKind::Latitude | PathKind::Longitude, PathModel::SingleQubit { omega0 }) => {
                if !(omega0 > 0.0) {
                    return Err(Error::InvalidModel(format!("gap must be positive, got {omega0}")));
                }
            }
            (
                PathKind::TwoQubitVarphi | PathKind::LztDelta | PathKind::Iswap,
                PathModel::TwoQubit { j },
            ) => {
                if !(j > 0.0) {
                    return Err(Error::InvalidModel(format!("coupling must be positive, got {j}")));
                }
            }
            (kind, m) => {
                return Err(Error::InvalidModel(format!(
                    "schedule kind {kind:?} does not match model {m:?}"
                )))
            }
        }
        Ok(DrivenPath { schedule, model })
    }

    pub fn dim(&self) -> usize {
        match self.model {
            PathModel::SingleQubit { .. } => 2,
            PathModel::TwoQubit { .. } => 4,
        }
    }

    pub fn hamiltonian_at_lambda(&self, lambda: f64) -> Result<Operator> {
        match (self.schedule.kind, self.model) {
            (PathKind::Latitude, PathModel::SingleQubit { omega0 }) => {
                model::h1_build(&model::SingleQubitParams::from_angles(omega0, FRAC_PI_2, lambda)?)
            }
            (PathKind::Longitude, PathModel::SingleQubit { omega0 }) => {
                model::h1_build(&model::SingleQubitParams::from_angles(omega0, lambda, 0.0)?)
            }
            (PathKind::TwoQubitVarphi, PathModel::TwoQubit { j }) => {
                model::h2_from_delta(model::delta_for_varphi(lambda, j), j)
            }
            (PathKind::LztDelta, PathModel::TwoQubit { j }) => model::h2_from_delta(lambda, j),
            (PathKind::Iswap, PathModel::TwoQubit { j }) => model::h2_from_delta(0.0, j),
            _ => unreachable!("validated in DrivenPath::new"),
        }
    }

    pub fn hamiltonian_at_time(&self, t: f64) -> Result<Operator> {
        self.hamiltonian_at_lambda(self.schedule.lambda_at(t))
    }

    /// Eigenenergy difference at the given lambda: omega0 for the single
    /// qubit, 2 J0 for the pair.
    pub fn gap_at_lambda(&self, lambda: f64) -> f64 {
        match (self.schedule.kind, self.model) {
            (_, PathModel::SingleQubit { omega0 }) => omega0,
            (PathKind::TwoQubitVarphi, PathModel::TwoQubit { j }) => {
                model::avoided_crossing_gap(model::delta_for_varphi(lambda, j), j)
                    .expect("validated coupling")
            }
            (PathKind::LztDelta, PathModel::TwoQubit { j }) => {
                model::avoided_crossing_gap(lambda, j).expect("validated coupling")
            }
            (PathKind::Iswap, PathModel::TwoQubit { j }) => 2.0 * j,
            _ => unreachable!("validated in DrivenPath::new"),
        }
    }

    pub fn gap_fn(&self) -> impl Fn(f64) -> f64 + '_ {
        move |lam| self.gap_at_lambda(lam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{iswap_schedule, jumping_schedule, lzt_schedule};
    use crate::units::mhz;
    use std::f64::consts::PI;

    #[test]
    fn latitude_keeps_constant_gap() {
        let s = jumping_schedule(-PI, 0.0, 5, 1.0, 250e-9, PathKind::Latitude).unwrap();
        let p = DrivenPath::new(s, PathModel::SingleQubit { omega0: mhz(10.0) }).unwrap();
        for lam in [-2.0, -1.0, -0.1] {
            assert_eq!(p.gap_at_lambda(lam), mhz(10.0));
            let h = p.hamiltonian_at_lambda(lam).unwrap();
            let (evals, _) = h.eig_hermitian().unwrap();
            assert!((evals[1] - evals[0] - mhz(10.0)).abs() < 1e-3);
        }
    }

    #[test]
    fn varphi_path_gap_is_two_j0() {
        let j = mhz(9.2);
        let s = jumping_schedule(0.0, PI, 5, 1.0, 88e-9, PathKind::TwoQubitVarphi).unwrap();
        let p = DrivenPath::new(s, PathModel::TwoQubit { j }).unwrap();
        let g = p.gap_at_lambda(PI / 2.0);
        assert!((g - 2.0 * j).abs() < 1e-6);
        let g2 = p.gap_at_lambda(PI / 10.0);
        assert!((g2 - 2.0 * j / (PI / 10.0).sin()).abs() < 1e-6);
    }

    #[test]
    fn lzt_hamiltonian_tracks_delta() {
        let j = mhz(9.2);
        let d0 = mhz(230.7);
        let s = lzt_schedule(d0, -d0, 88e-9, 100).unwrap();
        let p = DrivenPath::new(s, PathModel::TwoQubit { j }).unwrap();
        let h = p.hamiltonian_at_time(0.0).unwrap();
        assert!((h[(1, 1)].re - 0.5 * p.schedule.lambda_at(0.0)).abs() < 1e-3);
    }

    #[test]
    fn mismatched_kind_and_model_rejected() {
        let s = iswap_schedule(mhz(9.2), 27e-9).unwrap();
        assert!(DrivenPath::new(s, PathModel::SingleQubit { omega0: mhz(10.0) }).is_err());
    }
}
