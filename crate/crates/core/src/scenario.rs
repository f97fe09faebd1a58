//! Config-driven experiment scenarios.
//!
//! A [`ScenarioConfig`] is a single human-editable TOML document selecting a
//! model (latitude/longitude single-qubit transfer, two-qubit angle
//! staircase, detuning ramp, or resonant hold), a schedule, optional
//! decoherence and control noise, and an optional sweep axis. Built-in
//! presets reproduce the bundled figure-level experiments; `snacsim
//! list-scenarios` enumerates them.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::Error;
use crate::model;
use crate::noise::{apply_gaussian_noise, realized_snr, NoiseConfig, NoiseMode};
use crate::path::{DrivenPath, PathModel};
use crate::propagate::{
    propagate_lindblad, propagate_lindblad_trace, propagate_unitary, propagate_unitary_trace,
    transferred_population, DecoherenceParams, QubitDecoherence, Trajectory,
};
use crate::schedule::{
    inject_phase_errors, iswap_schedule, jumping_schedule, lzt_schedule, phase_ledger,
    pi_phase_schedule, PathKind,
};
use crate::state::{fidelity, QuantumState};
use crate::tomography::{tomography_1q, tomography_2q};
use crate::units;
use crate::waveform::{noisy_channels, sample_schedule};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Latitude,
    Longitude,
    TwoQubitVarphi,
    Lzt,
    Iswap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    None,
    Gamma,
    Chi,
    Time,
    Snr,
    Eta,
    DeltaChi,
    DecoherenceTime,
    Delta,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    /// Path endpoints in units of pi (ignored by detuning ramps and holds).
    pub lambda_start_pi: f64,
    pub lambda_end_pi: f64,
    pub segments: usize,
    pub gamma: f64,
    /// Total evolution time; omit when `pi_phase` sets the durations.
    pub time_ns: Option<f64>,
    /// Hold each segment until the accumulated dynamic phase reaches pi.
    pub pi_phase: bool,
    /// Discretization of detuning ramps.
    pub lzt_steps: usize,
    /// Per-segment dynamic-phase offsets in units of pi (empty for none).
    pub phase_errors_pi: Vec<f64>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            lambda_start_pi: -1.0,
            lambda_end_pi: 0.0,
            segments: 5,
            gamma: 1.0,
            time_ns: None,
            pi_phase: false,
            lzt_steps: 2000,
            phase_errors_pi: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    /// Single-qubit gap, linear MHz.
    pub omega0_mhz: Option<f64>,
    /// Two-qubit coupling, linear MHz.
    pub j_mhz: Option<f64>,
    /// Detuning ramp endpoints, linear MHz.
    pub delta_start_mhz: Option<f64>,
    pub delta_end_mhz: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DecoherenceConfig {
    pub enabled: bool,
    /// Per-qubit T1 in us (one entry per qubit, tensor order).
    pub t1_us: Vec<f64>,
    /// Per-qubit T2 in us.
    pub t2_us: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub enabled: bool,
    pub snr_db: f64,
    pub eta_ns: f64,
    pub mode: NoiseMode,
}

impl Default for NoiseSection {
    fn default() -> Self {
        NoiseSection { enabled: false, snr_db: 10.0, eta_ns: 1.0, mode: NoiseMode::Calibrated }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Number of seeds in the ensemble (noise/shot scenarios).
    pub seeds: u64,
    pub seed_base: u64,
    /// Integrator step for open-system runs.
    pub dt_ns: f64,
    /// Waveform clock in GSa/s.
    pub sample_rate_gsps: f64,
    /// Shot budget for tomography of the final state; omit for exact.
    pub shots: Option<u64>,
    pub emit_trajectory: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seeds: 1,
            seed_base: 7001,
            dt_ns: 0.1,
            sample_rate_gsps: 1.0,
            shots: None,
            emit_trajectory: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    /// Axis values: gamma (dimensionless), chi and delta-chi (units of pi),
    /// time (ns), snr (dB), eta (ns), delta (MHz).
    pub values: Vec<f64>,
    /// Segment counts for the jump-schedule arm of decoherence-time sweeps.
    pub segments_values: Vec<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { axis: SweepAxis::None, values: Vec::new(), segments_values: Vec::new() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub model: ModelKind,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub decoherence: DecoherenceConfig,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig { field: field.into(), reason: reason.into() }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn qubit_count(&self) -> usize {
        match self.model {
            ModelKind::Latitude | ModelKind::Longitude => 1,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(invalid("id", "must not be empty"));
        }
        match self.model {
            ModelKind::Latitude | ModelKind::Longitude => {
                let w = self.drive.omega0_mhz.ok_or_else(|| {
                    invalid("drive.omega0_mhz", "required for single-qubit models")
                })?;
                if !(w > 0.0) {
                    return Err(invalid("drive.omega0_mhz", "must be positive"));
                }
            }
            ModelKind::TwoQubitVarphi | ModelKind::Lzt | ModelKind::Iswap => {
                let j = self
                    .drive
                    .j_mhz
                    .ok_or_else(|| invalid("drive.j_mhz", "required for two-qubit models"))?;
                if !(j > 0.0) {
                    return Err(invalid("drive.j_mhz", "must be positive"));
                }
            }
        }
        if self.model == ModelKind::Lzt {
            if self.drive.delta_start_mhz.is_none() || self.drive.delta_end_mhz.is_none() {
                return Err(invalid(
                    "drive.delta_start_mhz",
                    "detuning ramp needs delta_start_mhz and delta_end_mhz",
                ));
            }
            if self.schedule.time_ns.is_none() {
                return Err(invalid("schedule.time_ns", "detuning ramp needs a total time"));
            }
            if self.schedule.lzt_steps < 2 {
                return Err(invalid("schedule.lzt_steps", "need at least 2 steps"));
            }
        }
        if self.schedule.segments == 0 {
            return Err(invalid("schedule.segments", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.schedule.gamma) {
            return Err(invalid("schedule.gamma", "must lie in [0, 1]"));
        }
        if self.model == ModelKind::TwoQubitVarphi && self.schedule.gamma != 1.0 {
            return Err(invalid(
                "schedule.gamma",
                "the two-qubit angle staircase needs gamma = 1 (the angle endpoints sit at infinite detuning)",
            ));
        }
        match (self.model, self.schedule.pi_phase, self.schedule.time_ns) {
            (ModelKind::Iswap, _, _) => {}
            (_, false, Option::None) => {
                return Err(invalid("schedule.time_ns", "required unless pi_phase is set"))
            }
            (_, true, _) if self.schedule.gamma != 1.0 => {
                return Err(invalid("schedule.pi_phase", "pi-phase durations need gamma = 1"))
            }
            _ => {}
        }
        if let Some(t) = self.schedule.time_ns {
            if !(t > 0.0) {
                return Err(invalid("schedule.time_ns", "must be positive"));
            }
        }
        if !self.schedule.phase_errors_pi.is_empty() {
            if self.schedule.phase_errors_pi.len() != self.schedule.segments {
                return Err(invalid(
                    "schedule.phase_errors_pi",
                    format!("need one entry per segment ({})", self.schedule.segments),
                ));
            }
            if self.schedule.gamma != 1.0 {
                return Err(invalid("schedule.phase_errors_pi", "phase offsets need gamma = 1"));
            }
        }
        if self.decoherence.enabled {
            let n = self.qubit_count();
            if self.decoherence.t1_us.len() != n || self.decoherence.t2_us.len() != n {
                return Err(invalid(
                    "decoherence.t1_us",
                    format!("need {n} per-qubit entries for T1 and T2"),
                ));
            }
            for (t1, t2) in self.decoherence.t1_us.iter().zip(&self.decoherence.t2_us) {
                QubitDecoherence::new(units::us(*t1), units::us(*t2))
                    .map_err(|e| invalid("decoherence.t2_us", e.to_string()))?;
            }
        }
        if self.noise.enabled {
            if !(self.noise.eta_ns > 0.0) {
                return Err(invalid("noise.eta_ns", "must be positive"));
            }
        }
        if self.run.seeds == 0 {
            return Err(invalid("run.seeds", "must be at least 1"));
        }
        if !(self.run.dt_ns > 0.0) {
            return Err(invalid("run.dt_ns", "must be positive"));
        }
        if !(self.run.sample_rate_gsps > 0.0) {
            return Err(invalid("run.sample_rate_gsps", "must be positive"));
        }
        match self.sweep.axis {
            SweepAxis::None => {}
            axis => {
                if self.sweep.values.is_empty() && axis != SweepAxis::DecoherenceTime {
                    return Err(invalid("sweep.values", "must not be empty"));
                }
                match axis {
                    SweepAxis::Gamma => {
                        if self.sweep.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                            return Err(invalid("sweep.values", "gamma values must lie in [0, 1]"));
                        }
                    }
                    SweepAxis::Chi => {
                        if self.sweep.values.iter().any(|v| !(v > &0.0)) {
                            return Err(invalid("sweep.values", "chi values must be positive"));
                        }
                    }
                    SweepAxis::Time => {
                        if self.sweep.values.iter().any(|v| !(v > &0.0)) {
                            return Err(invalid("sweep.values", "times must be positive"));
                        }
                    }
                    SweepAxis::Snr | SweepAxis::Eta => {
                        if self.run.seeds < 20 {
                            return Err(invalid(
                                "run.seeds",
                                "noise sweeps need at least 20 seeds per point",
                            ));
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// A scenario resolved into concrete physics objects.
pub struct ResolvedScenario {
    pub path: DrivenPath,
    pub psi0: QuantumState,
    pub target: QuantumState,
    pub dec: Option<DecoherenceParams>,
}

pub fn resolve(cfg: &ScenarioConfig) -> Result<ResolvedScenario> {
    let sched_cfg = &cfg.schedule;
    let lam0 = sched_cfg.lambda_start_pi * PI;
    let lam_t = sched_cfg.lambda_end_pi * PI;
    let time = sched_cfg.time_ns.map(units::ns);

    let (path, psi0, target) = match cfg.model {
        ModelKind::Latitude | ModelKind::Longitude => {
            let omega0 = units::mhz(cfg.drive.omega0_mhz.expect("validated"));
            let kind = if cfg.model == ModelKind::Latitude {
                PathKind::Latitude
            } else {
                PathKind::Longitude
            };
            let schedule = if sched_cfg.pi_phase {
                pi_phase_schedule(lam0, lam_t, sched_cfg.segments, kind, |_| omega0)?
            } else {
                jumping_schedule(
                    lam0,
                    lam_t,
                    sched_cfg.segments,
                    sched_cfg.gamma,
                    time.expect("validated"),
                    kind,
                )?
            };
            let path = DrivenPath::new(schedule, PathModel::SingleQubit { omega0 })?;
            let (psi0, target) = match kind {
                PathKind::Latitude => {
                    let (_, start) = model::h1_eigenstates(PI / 2.0, lam0);
                    let (_, end) = model::h1_eigenstates(PI / 2.0, lam_t);
                    (start, end)
                }
                _ => {
                    let (_, start) = model::h1_eigenstates(lam0, 0.0);
                    let (_, end) = model::h1_eigenstates(lam_t, 0.0);
                    (start, end)
                }
            };
            (path, psi0, target)
        }
        ModelKind::TwoQubitVarphi => {
            let j = units::mhz(cfg.drive.j_mhz.expect("validated"));
            let gap = move |phi: f64| 2.0 * j / phi.sin();
            let schedule = if sched_cfg.pi_phase {
                pi_phase_schedule(lam0, lam_t, sched_cfg.segments, PathKind::TwoQubitVarphi, gap)?
            } else {
                jumping_schedule(
                    lam0,
                    lam_t,
                    sched_cfg.segments,
                    1.0,
                    time.expect("validated"),
                    PathKind::TwoQubitVarphi,
                )?
            };
            let path = DrivenPath::new(schedule, PathModel::TwoQubit { j })?;
            (path, QuantumState::two_qubit_basis(1, 0), QuantumState::two_qubit_basis(0, 1))
        }
        ModelKind::Lzt => {
            let j = units::mhz(cfg.drive.j_mhz.expect("validated"));
            let d0 = units::mhz(cfg.drive.delta_start_mhz.expect("validated"));
            let d1 = units::mhz(cfg.drive.delta_end_mhz.expect("validated"));
            let schedule = lzt_schedule(d0, d1, time.expect("validated"), sched_cfg.lzt_steps)?;
            let path = DrivenPath::new(schedule, PathModel::TwoQubit { j })?;
            (path, QuantumState::two_qubit_basis(1, 0), QuantumState::two_qubit_basis(0, 1))
        }
        ModelKind::Iswap => {
            let j = units::mhz(cfg.drive.j_mhz.expect("validated"));
            let t = time.unwrap_or(PI / (2.0 * j));
            let schedule = iswap_schedule(j, t)?;
            let path = DrivenPath::new(schedule, PathModel::TwoQubit { j })?;
            (path, QuantumState::two_qubit_basis(1, 0), QuantumState::two_qubit_basis(0, 1))
        }
    };

    let path = if sched_cfg.phase_errors_pi.is_empty() {
        path
    } else {
        let deltas: Vec<f64> = sched_cfg.phase_errors_pi.iter().map(|d| d * PI).collect();
        let ledger = phase_ledger(&path.schedule, path.gap_fn());
        let (schedule, _) = inject_phase_errors(&path.schedule, &ledger, &deltas)?;
        DrivenPath::new(schedule, path.model)?
    };

    let dec = if cfg.decoherence.enabled {
        let qubits: Result<Vec<QubitDecoherence>> = cfg
            .decoherence
            .t1_us
            .iter()
            .zip(&cfg.decoherence.t2_us)
            .map(|(&t1, &t2)| QubitDecoherence::new(units::us(t1), units::us(t2)))
            .collect();
        Some(DecoherenceParams { qubits: qubits? })
    } else {
        None
    };

    Ok(ResolvedScenario { path, psi0, target, dec })
}

/// Scalar results of one simulated run.
#[derive(Clone, Copy, Debug)]
pub struct PointOutcome {
    /// Uhlmann fidelity to the target state (open-system when decoherence is
    /// enabled, otherwise equal to `fidelity_unitary`).
    pub fidelity: f64,
    /// Transferred population: excited-state population of the second qubit
    /// for two-qubit runs, target-state overlap for single-qubit runs.
    pub population: f64,
    pub fidelity_unitary: f64,
    pub population_unitary: f64,
    /// Realized signal-to-noise ratio in dB (NaN without noise).
    pub realized_snr_db: f64,
    pub total_time_ns: f64,
}

fn measure(
    cfg: &ScenarioConfig,
    rs: &ResolvedScenario,
    traj: &Trajectory,
    seed: u64,
) -> Result<(f64, f64)> {
    let final_state = traj.final_state();
    let reconstructed;
    let state = match cfg.run.shots {
        Some(shots) => {
            reconstructed = if rs.path.dim() == 2 {
                tomography_1q(final_state, Some(shots), seed ^ 0x51ab_17de)?
            } else {
                tomography_2q(final_state, Some(shots), seed ^ 0x51ab_17de)?
            };
            &reconstructed
        }
        Option::None => final_state,
    };
    let fid = fidelity(&rs.target, state)?;
    let pop = if rs.path.dim() == 4 {
        let single = Trajectory {
            times: vec![traj.final_time()],
            states: vec![state.clone()],
            diagnostics: traj.diagnostics,
        };
        transferred_population(&single, "01")?
    } else {
        state.overlap_with_pure(&rs.target)?
    };
    Ok((fid, pop))
}

/// Simulate one scenario point with a given seed; optionally keep the
/// trajectory of the primary (decoherent if enabled) run.
pub fn simulate_point_traj(
    cfg: &ScenarioConfig,
    seed: u64,
    keep_trajectory: bool,
) -> Result<(PointOutcome, Option<Trajectory>)> {
    let rs = resolve(cfg)?;
    let dt = units::ns(cfg.run.dt_ns);
    let total_time_ns = units::s_to_ns(rs.path.schedule.total_duration());

    let mut realized = f64::NAN;
    let (unitary_traj, dec_traj) = if cfg.noise.enabled {
        let sr = cfg.run.sample_rate_gsps * 1e9;
        let clean = sample_schedule(&rs.path, sr)?;
        let ncfg = NoiseConfig {
            snr_db: cfg.noise.snr_db,
            eta: units::ns(cfg.noise.eta_ns),
            seed,
            mode: cfg.noise.mode,
        };
        let noisy = apply_gaussian_noise(&clean, &ncfg, noisy_channels(rs.path.schedule.kind))?;
        realized = realized_snr(&clean, &noisy)?;
        let unitary = propagate_unitary_trace(&noisy, rs.path.model, &rs.psi0)?;
        let dec_traj = match &rs.dec {
            Some(dec) => {
                let rho0 =
                    QuantumState::density(rs.psi0.density_matrix(), rs.psi0.tensor_factors().to_vec())?;
                Some(propagate_lindblad_trace(&noisy, rs.path.model, &rho0, dec, dt)?)
            }
            Option::None => Option::None,
        };
        (unitary, dec_traj)
    } else {
        let unitary = propagate_unitary(&rs.path, &rs.psi0, dt)?;
        let dec_traj = match &rs.dec {
            Some(dec) => {
                let rho0 =
                    QuantumState::density(rs.psi0.density_matrix(), rs.psi0.tensor_factors().to_vec())?;
                Some(propagate_lindblad(&rs.path, &rho0, dec, dt)?)
            }
            Option::None => Option::None,
        };
        (unitary, dec_traj)
    };

    let (fidelity_unitary, population_unitary) = measure(cfg, &rs, &unitary_traj, seed)?;
    let (fid, pop, primary) = match dec_traj {
        Some(traj) => {
            let (f, p) = measure(cfg, &rs, &traj, seed)?;
            (f, p, traj)
        }
        Option::None => (fidelity_unitary, population_unitary, unitary_traj),
    };

    let outcome = PointOutcome {
        fidelity: fid,
        population: pop,
        fidelity_unitary,
        population_unitary,
        realized_snr_db: realized,
        total_time_ns,
    };
    Ok((outcome, if keep_trajectory { Some(primary) } else { Option::None }))
}

pub fn simulate_point(cfg: &ScenarioConfig, seed: u64) -> Result<PointOutcome> {
    simulate_point_traj(cfg, seed, false).map(|(o, _)| o)
}

/// Bundled scenario presets. Each covers one figure-level experiment and the
/// acceptance checks that reference it.
pub fn builtin_ids() -> Vec<&'static str> {
    vec![
        "fig2-latitude",
        "fig2-longitude",
        "fig3-gamma",
        "fig3-chi",
        "fig3-time",
        "fig4-noise-eta",
        "fig4-noise-snr",
        "fig5-calibration",
        "fig6-snac",
        "fig6-lzt",
        "fig6-phase-errors",
        "fig7-decoherence",
        "fig7-phase",
        "metrics",
    ]
}

fn base_latitude() -> ScenarioConfig {
    ScenarioConfig {
        id: "fig2-latitude".into(),
        description: "Equatorial jump transfer |+x> -> |-x| at a 10 MHz gap, five pi-phase holds over 250 ns".into(),
        model: ModelKind::Latitude,
        schedule: ScheduleConfig { time_ns: Some(250.0), ..Default::default() },
        drive: DriveConfig { omega0_mhz: Some(10.0), ..Default::default() },
        decoherence: DecoherenceConfig {
            enabled: true,
            t1_us: vec![26.4],
            t2_us: vec![45.4],
        },
        noise: NoiseSection::default(),
        run: RunConfig { emit_trajectory: true, ..Default::default() },
        sweep: SweepConfig::default(),
    }
}

fn base_two_qubit_snac() -> ScenarioConfig {
    ScenarioConfig {
        id: "fig6-snac".into(),
        description: "Two-qubit jump transfer |10> -> |01> along the mixing angle, five pi-phase holds (about 88 ns)".into(),
        model: ModelKind::TwoQubitVarphi,
        schedule: ScheduleConfig {
            lambda_start_pi: 0.0,
            lambda_end_pi: 1.0,
            pi_phase: true,
            ..Default::default()
        },
        drive: DriveConfig {
            j_mhz: Some(9.2),
            delta_start_mhz: Some(230.7),
            delta_end_mhz: Some(-230.7),
            ..Default::default()
        },
        decoherence: DecoherenceConfig {
            enabled: true,
            t1_us: vec![13.4, 22.1],
            t2_us: vec![10.8, 4.5],
        },
        noise: NoiseSection::default(),
        run: RunConfig { emit_trajectory: true, ..Default::default() },
        sweep: SweepConfig::default(),
    }
}

/// Total duration of the five-hold two-qubit jump schedule, used to match
/// the detuning-ramp comparison time.
pub fn two_qubit_pi_phase_total_ns(j_mhz: f64, segments: usize) -> f64 {
    let j = units::mhz(j_mhz);
    let half = PI / (2.0 * segments as f64);
    units::s_to_ns(PI / (2.0 * j * half.sin()))
}

pub fn builtin(id: &str) -> Result<ScenarioConfig> {
    let cfg = match id {
        "fig2-latitude" => base_latitude(),
        "fig2-longitude" => {
            let mut c = base_latitude();
            c.id = "fig2-longitude".into();
            c.description =
                "Meridian jump transfer |+z> -> |-z> at a 25 MHz gap, five pi-phase holds over 100 ns".into();
            c.model = ModelKind::Longitude;
            c.schedule.time_ns = Some(100.0);
            c.drive.omega0_mhz = Some(25.0);
            c
        }
        "fig3-gamma" => {
            let mut c = base_latitude();
            c.id = "fig3-gamma".into();
            c.description = "Transfer fidelity vs jumping ratio at fixed 250 ns".into();
            c.run.emit_trajectory = false;
            c.sweep = SweepConfig {
                axis: SweepAxis::Gamma,
                values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
                segments_values: vec![],
            };
            c
        }
        "fig3-chi" => {
            let mut c = base_latitude();
            c.id = "fig3-chi".into();
            c.description = "Transfer fidelity vs per-segment dynamic phase".into();
            c.run.emit_trajectory = false;
            c.sweep = SweepConfig {
                axis: SweepAxis::Chi,
                values: vec![0.5, 0.625, 0.75, 0.875, 1.0, 1.125, 1.25, 1.375, 1.5],
                segments_values: vec![],
            };
            c
        }
        "fig3-time" => {
            let mut c = builtin("fig2-longitude")?;
            c.id = "fig3-time".into();
            c.description =
                "Transferred population vs total time for continuous (gamma 0) and jump (gamma 1) drive at 25 MHz".into();
            c.run.emit_trajectory = false;
            c.sweep = SweepConfig {
                axis: SweepAxis::Time,
                values: (1..=50).map(|k| 10.0 * k as f64).collect(),
                segments_values: vec![],
            };
            c
        }
        "fig4-noise-eta" => {
            let mut c = base_latitude();
            c.id = "fig4-noise-eta".into();
            c.description = "Mean transfer fidelity vs noise holding time at 10 dB SNR".into();
            c.run.emit_trajectory = false;
            c.run.seeds = 50;
            c.noise = NoiseSection { enabled: true, ..Default::default() };
            c.sweep = SweepConfig {
                axis: SweepAxis::Eta,
                values: vec![1.0, 2.0, 5.0, 10.0, 25.0],
                segments_values: vec![],
            };
            c
        }
        "fig4-noise-snr" => {
            let mut c = base_latitude();
            c.id = "fig4-noise-snr".into();
            c.description = "Mean transfer fidelity vs noise power at 1 ns holding time".into();
            c.run.emit_trajectory = false;
            c.run.seeds = 50;
            c.noise = NoiseSection { enabled: true, ..Default::default() };
            c.sweep = SweepConfig {
                axis: SweepAxis::Snr,
                values: vec![0.0, 5.0, 10.0, 15.0, 20.0, 30.0, 40.0, 60.0],
                segments_values: vec![],
            };
            c
        }
        "fig5-calibration" => ScenarioConfig {
            id: "fig5-calibration".into(),
            description: "Avoided-crossing gap vs detuning: eigensplit against the calibration formula".into(),
            model: ModelKind::Lzt,
            schedule: ScheduleConfig { time_ns: Some(88.0), ..Default::default() },
            drive: DriveConfig {
                j_mhz: Some(9.2),
                delta_start_mhz: Some(230.7),
                delta_end_mhz: Some(-230.7),
                ..Default::default()
            },
            decoherence: DecoherenceConfig::default(),
            noise: NoiseSection::default(),
            run: RunConfig::default(),
            sweep: SweepConfig {
                axis: SweepAxis::Delta,
                values: (-20..=20).map(|k| 10.0 * k as f64).collect(),
                segments_values: vec![],
            },
        },
        "fig6-snac" => base_two_qubit_snac(),
        "fig6-lzt" => {
            let mut c = base_two_qubit_snac();
            c.id = "fig6-lzt".into();
            c.description =
                "Two-qubit transfer by a linear detuning ramp over the same range and duration as the jump schedule".into();
            c.model = ModelKind::Lzt;
            c.schedule = ScheduleConfig {
                time_ns: Some(two_qubit_pi_phase_total_ns(9.2, 5)),
                ..Default::default()
            };
            c
        }
        "fig6-phase-errors" => {
            let mut c = base_two_qubit_snac();
            c.id = "fig6-phase-errors".into();
            c.description =
                "Jump transfer with the mock deformed-pulse phase offsets applied per segment".into();
            c.schedule.phase_errors_pi = vec![0.0, 0.28, 0.15, 0.1, 0.0];
            c
        }
        "fig7-decoherence" => {
            let mut c = base_two_qubit_snac();
            c.id = "fig7-decoherence".into();
            c.description =
                "Transferred population vs evolution time for ramp and jump protocols under decoherence".into();
            c.model = ModelKind::Lzt;
            c.schedule = ScheduleConfig { time_ns: Some(88.0), ..Default::default() };
            c.run.emit_trajectory = false;
            c.sweep = SweepConfig {
                axis: SweepAxis::DecoherenceTime,
                values: (2..=40).map(|k| 20.0 * k as f64).collect(),
                segments_values: (3..=12).collect(),
            };
            c
        }
        "fig7-phase" => {
            let mut c = base_two_qubit_snac();
            c.id = "fig7-phase".into();
            c.description =
                "Transferred population vs uniform dynamic-phase offset for jump, swap, and ramp protocols (no decoherence)".into();
            c.decoherence = DecoherenceConfig::default();
            c.run.emit_trajectory = false;
            c.sweep = SweepConfig {
                axis: SweepAxis::DeltaChi,
                values: (-8..=8).map(|k| 0.025 * k as f64).collect(),
                segments_values: vec![],
            };
            c
        }
        "metrics" => {
            let mut c = base_latitude();
            c.id = "metrics".into();
            c.description =
                "Adiabaticity measures for the reference paths: angular-rate and matrix-element forms, plus the interference metric".into();
            c.decoherence = DecoherenceConfig::default();
            c.run.emit_trajectory = false;
            c
        }
        other => return Err(Error::UnknownScenario(other.into())),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_all_validate() {
        for id in builtin_ids() {
            let cfg = builtin(id).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert_eq!(cfg.id, id);
            cfg.validate().unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn toml_roundtrip() {
        let cfg = builtin("fig6-snac").unwrap();
        let text = cfg.to_toml();
        let back = ScenarioConfig::from_toml(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn validation_names_offending_field() {
        let mut cfg = builtin("fig2-latitude").unwrap();
        cfg.drive.omega0_mhz = Option::None;
        match cfg.validate() {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "drive.omega0_mhz"),
            other => panic!("expected InvalidConfig, got {other:?}"),
        }
        let mut cfg = builtin("fig3-gamma").unwrap();
        cfg.sweep.values.clear();
        match cfg.validate() {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "sweep.values"),
            other => panic!("expected InvalidConfig, got {other:?}"),
        }
        let mut cfg = builtin("fig3-gamma").unwrap();
        cfg.sweep.values = vec![0.5, 1.2];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn resolve_latitude_endpoints() {
        let cfg = builtin("fig2-latitude").unwrap();
        let rs = resolve(&cfg).unwrap();
        assert_eq!(rs.path.dim(), 2);
        // start |+x>, target |-x>
        let b0 = crate::state::bloch_vector(&rs.psi0).unwrap();
        let bt = crate::state::bloch_vector(&rs.target).unwrap();
        assert!((b0[0] - 1.0).abs() < 1e-12);
        assert!((bt[0] + 1.0).abs() < 1e-12);
        assert!(rs.dec.is_some());
    }

    #[test]
    fn resolve_two_qubit_durations() {
        let cfg = builtin("fig6-snac").unwrap();
        let rs = resolve(&cfg).unwrap();
        let total = units::s_to_ns(rs.path.schedule.total_duration());
        assert!((total - 87.9366).abs() < 1e-3, "total {total}");
    }

    #[test]
    fn phase_error_injection_extends_schedule() {
        let plain = resolve(&builtin("fig6-snac").unwrap()).unwrap();
        let bent = resolve(&builtin("fig6-phase-errors").unwrap()).unwrap();
        assert!(bent.path.schedule.total_duration() > plain.path.schedule.total_duration());
    }

    #[test]
    fn simulate_point_latitude_reference() {
        let mut cfg = builtin("fig2-latitude").unwrap();
        cfg.run.emit_trajectory = false;
        let out = simulate_point(&cfg, cfg.run.seed_base).unwrap();
        assert!(out.fidelity_unitary > 0.999, "unitary {}", out.fidelity_unitary);
        assert!(out.fidelity > 0.99, "decoherent {}", out.fidelity);
        assert!(out.fidelity < out.fidelity_unitary);
        assert!((out.total_time_ns - 250.0).abs() < 1e-9);
        assert!(out.realized_snr_db.is_nan());
    }

    #[test]
    fn simulate_point_with_noise_is_deterministic() {
        let mut cfg = builtin("fig4-noise-snr").unwrap();
        cfg.sweep = SweepConfig::default();
        cfg.run.seeds = 1;
        let a = simulate_point(&cfg, 42).unwrap();
        let b = simulate_point(&cfg, 42).unwrap();
        assert_eq!(a.fidelity.to_bits(), b.fidelity.to_bits());
        assert!(a.realized_snr_db.is_finite());
        let c = simulate_point(&cfg, 43).unwrap();
        assert_ne!(a.fidelity.to_bits(), c.fidelity.to_bits());
    }
}
