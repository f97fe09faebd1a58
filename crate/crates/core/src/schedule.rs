//! Control-parameter schedules.
//!
//! A [`PathSchedule`] is an ordered list of segments, each a hold or a linear
//! ramp in the control parameter lambda. Discontinuities are implicit: the
//! parameter jumps between the end of one segment and the start of the next
//! (and from `lambda0` into the first segment, and out of the last segment to
//! `lambda_t`). The jump staircase holds at the segment midpoints
//! `lambda0 + (lambdaT - lambda0)(2k+1)/(2N)`; intermediate jumping ratios
//! split each segment's displacement between two half-jumps and a centered
//! linear ramp so that the gamma = 0 and gamma = 1 limits are exact and
//! lambda(t) stays monotone.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::units;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    /// phi sweeps at fixed theta = pi/2 (equatorial circle).
    Latitude,
    /// theta sweeps at fixed phi = 0 (pole-to-pole meridian).
    Longitude,
    /// Mixing angle varphi of the coupled-qubit block.
    TwoQubitVarphi,
    /// Detuning ramp through the avoided crossing; lambda is delta in rad/s.
    LztDelta,
    /// Resonant hold at zero detuning.
    Iswap,
}

/// One schedule segment: a hold when `lambda_start == lambda_end`, otherwise
/// a linear ramp. Durations in seconds, lambda in rad (rad/s for detunings).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub lambda_start: f64,
    pub lambda_end: f64,
    pub duration: f64,
}

impl Segment {
    pub fn is_hold(&self) -> bool {
        self.lambda_start == self.lambda_end
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lambda_start + self.lambda_end)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSchedule {
    pub segments: Vec<Segment>,
    pub lambda0: f64,
    pub lambda_t: f64,
    pub gamma: f64,
    pub kind: PathKind,
}

impl PathSchedule {
    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }

    /// lambda at time t. Jumps land on the segment being entered; t < 0
    /// reports lambda0 and t at (or beyond) the total duration reports
    /// lambda_t, including the implicit final jump.
    pub fn lambda_at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.lambda0;
        }
        let total = self.total_duration();
        if t >= total || (total - t) <= 1e-12 * total {
            return self.lambda_t;
        }
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            if t < end {
                let frac = if seg.duration > 0.0 { (t - start) / seg.duration } else { 0.0 };
                return seg.lambda_start + (seg.lambda_end - seg.lambda_start) * frac;
            }
            start = end;
        }
        self.lambda_t
    }

    /// Replace hold durations, e.g. with per-segment pi-phase times.
    pub fn with_durations(&self, durations: &[f64]) -> Result<PathSchedule> {
        if durations.len() != self.segments.len() {
            return Err(Error::InvalidSchedule(format!(
                "expected {} durations, got {}",
                self.segments.len(),
                durations.len()
            )));
        }
        if durations.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::InvalidSchedule("durations must be positive".into()));
        }
        let mut out = self.clone();
        for (seg, &d) in out.segments.iter_mut().zip(durations.iter()) {
            seg.duration = d;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScheduleDocument::from(self)).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<PathSchedule> {
        let doc: ScheduleDocument =
            serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        doc.into_schedule()
    }
}

/// JSON view of a schedule with durations in ns, for inspection and replay.
#[derive(Serialize, Deserialize)]
struct ScheduleDocument {
    kind: PathKind,
    lambda0: f64,
    lambda_t: f64,
    gamma: f64,
    segments: Vec<SegmentDocument>,
}

#[derive(Serialize, Deserialize)]
struct SegmentDocument {
    lambda_start: f64,
    lambda_end: f64,
    duration_ns: f64,
}

impl From<&PathSchedule> for ScheduleDocument {
    fn from(s: &PathSchedule) -> Self {
        ScheduleDocument {
            kind: s.kind,
            lambda0: s.lambda0,
            lambda_t: s.lambda_t,
            gamma: s.gamma,
            segments: s
                .segments
                .iter()
                .map(|seg| SegmentDocument {
                    lambda_start: seg.lambda_start,
                    lambda_end: seg.lambda_end,
                    duration_ns: units::s_to_ns(seg.duration),
                })
                .collect(),
        }
    }
}

impl ScheduleDocument {
    fn into_schedule(self) -> Result<PathSchedule> {
        Ok(PathSchedule {
            segments: self
                .segments
                .into_iter()
                .map(|d| Segment {
                    lambda_start: d.lambda_start,
                    lambda_end: d.lambda_end,
                    duration: units::ns(d.duration_ns),
                })
                .collect(),
            lambda0: self.lambda0,
            lambda_t: self.lambda_t,
            gamma: self.gamma,
            kind: self.kind,
        })
    }
}

/// N-segment jumping schedule from lambda0 to lambdaT over total time T.
///
/// Segment k occupies [kT/N, (k+1)T/N]. The parameter jumps by
/// `gamma (lambdaT - lambda0) / (2N)` on each side of a linear ramp covering
/// the remaining displacement, centered on the midpoint
/// `lambda0 + (lambdaT - lambda0)(2k+1)/(2N)`. gamma = 1 degenerates to pure
/// holds at the midpoints, gamma = 0 to one continuous linear ramp.
pub fn jumping_schedule(
    lambda0: f64,
    lambda_t: f64,
    n: usize,
    gamma: f64,
    total_time: f64,
    kind: PathKind,
) -> Result<PathSchedule> {
    if n == 0 {
        return Err(Error::InvalidSchedule("segment count must be at least 1".into()));
    }
    if !(total_time > 0.0) {
        return Err(Error::InvalidSchedule(format!("total time must be positive, got {total_time}")));
    }
    if lambda0 == lambda_t {
        return Err(Error::InvalidSchedule("lambda0 and lambdaT must differ".into()));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidSchedule(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    let dl = lambda_t - lambda0;
    let nf = n as f64;
    let segments = (0..n)
        .map(|k| {
            let kf = k as f64;
            Segment {
                lambda_start: lambda0 + dl * (kf + 0.5 * gamma) / nf,
                lambda_end: lambda0 + dl * (kf + 1.0 - 0.5 * gamma) / nf,
                duration: total_time / nf,
            }
        })
        .collect();
    Ok(PathSchedule { segments, lambda0, lambda_t: lambda_t, gamma, kind })
}

/// Hold durations that accumulate a dynamic phase of pi per segment:
/// `tau_k = pi / gap(lambda_k)` with `gap` the eigenenergy difference at the
/// hold point.
pub fn pi_phase_durations(midpoints: &[f64], gap_fn: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    midpoints
        .iter()
        .map(|&lam| {
            let gap = gap_fn(lam);
            if !(gap > 0.0) {
                return Err(Error::InvalidSchedule(format!(
                    "vanishing gap {gap} at lambda = {lam}"
                )));
            }
            Ok(std::f64::consts::PI / gap)
        })
        .collect()
}

/// Pure-jump schedule with per-segment pi-phase hold durations.
pub fn pi_phase_schedule(
    lambda0: f64,
    lambda_t: f64,
    n: usize,
    kind: PathKind,
    gap_fn: impl Fn(f64) -> f64,
) -> Result<PathSchedule> {
    let base = jumping_schedule(lambda0, lambda_t, n, 1.0, 1.0, kind)?;
    let midpoints: Vec<f64> = base.segments.iter().map(|s| s.midpoint()).collect();
    let durations = pi_phase_durations(&midpoints, gap_fn)?;
    base.with_durations(&durations)
}

/// Linear detuning ramp discretized into equal pieces.
pub fn lzt_schedule(
    delta_start: f64,
    delta_end: f64,
    total_time: f64,
    steps: usize,
) -> Result<PathSchedule> {
    if !(total_time > 0.0) {
        return Err(Error::InvalidSchedule(format!("total time must be positive, got {total_time}")));
    }
    if steps < 2 {
        return Err(Error::InvalidSchedule("at least 2 steps required".into()));
    }
    let nf = steps as f64;
    let segments = (0..steps)
        .map(|k| {
            let f0 = k as f64 / nf;
            let f1 = (k + 1) as f64 / nf;
            Segment {
                lambda_start: delta_start + (delta_end - delta_start) * f0,
                lambda_end: delta_start + (delta_end - delta_start) * f1,
                duration: total_time / nf,
            }
        })
        .collect();
    Ok(PathSchedule {
        segments,
        lambda0: delta_start,
        lambda_t: delta_end,
        gamma: 0.0,
        kind: PathKind::LztDelta,
    })
}

/// Resonant hold at zero detuning (varphi = pi/2). A complete |10> -> |01>
/// swap needs 2 J t = pi.
pub fn iswap_schedule(j: f64, total_time: f64) -> Result<PathSchedule> {
    if !(j > 0.0) {
        return Err(Error::InvalidSchedule(format!("coupling must be positive, got {j}")));
    }
    if total_time < 0.0 {
        return Err(Error::InvalidSchedule(format!("negative hold time {total_time}")));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    Ok(PathSchedule {
        segments: vec![Segment {
            lambda_start: half_pi,
            lambda_end: half_pi,
            duration: total_time,
        }],
        lambda0: half_pi,
        lambda_t: half_pi,
        gamma: 1.0,
        kind: PathKind::Iswap,
    })
}

/// Per-segment accumulated dynamic phase chi_k (and injected offsets).
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicPhaseLedger {
    pub chi: Vec<f64>,
    pub delta_chi: Vec<f64>,
}

/// Accumulate the dynamic phase per segment: chi_k = integral of gap dt,
/// exact for holds, midpoint quadrature within ramps.
pub fn phase_ledger(schedule: &PathSchedule, gap_fn: impl Fn(f64) -> f64) -> DynamicPhaseLedger {
    let chi = schedule
        .segments
        .iter()
        .map(|seg| {
            if seg.is_hold() {
                gap_fn(seg.lambda_start) * seg.duration
            } else {
                let m = 512;
                let h = seg.duration / m as f64;
                (0..m)
                    .map(|i| {
                        let frac = (i as f64 + 0.5) / m as f64;
                        let lam = seg.lambda_start + (seg.lambda_end - seg.lambda_start) * frac;
                        gap_fn(lam) * h
                    })
                    .sum()
            }
        })
        .collect::<Vec<f64>>();
    let delta_chi = vec![0.0; chi.len()];
    DynamicPhaseLedger { chi, delta_chi }
}

/// Rescale hold durations so each segment accumulates pi + delta_chi_k:
/// `tau_k' = (pi + delta_chi_k) / gap_k`. Only meaningful for hold (pure
/// jump) schedules; the per-segment gap is recovered from the ledger.
pub fn inject_phase_errors(
    schedule: &PathSchedule,
    ledger: &DynamicPhaseLedger,
    deltas: &[f64],
) -> Result<(PathSchedule, DynamicPhaseLedger)> {
    let n = schedule.segments.len();
    if deltas.len() != n || ledger.chi.len() != n {
        return Err(Error::InvalidSchedule(format!(
            "expected {n} phase offsets, got {}",
            deltas.len()
        )));
    }
    if schedule.segments.iter().any(|s| !s.is_hold()) {
        return Err(Error::InvalidSchedule(
            "phase-error injection requires a pure-jump (hold) schedule".into(),
        ));
    }
    let pi = std::f64::consts::PI;
    let mut durations = Vec::with_capacity(n);
    let mut new_chi = Vec::with_capacity(n);
    for k in 0..n {
        let gap = ledger.chi[k] / schedule.segments[k].duration;
        let target = pi + deltas[k];
        let tau = target / gap;
        if !(tau > 0.0) {
            return Err(Error::InvalidSchedule(format!(
                "phase offset {} yields non-positive duration in segment {k}",
                deltas[k]
            )));
        }
        durations.push(tau);
        new_chi.push(target);
    }
    let out = schedule.with_durations(&durations)?;
    Ok((out, DynamicPhaseLedger { chi: new_chi, delta_chi: deltas.to_vec() }))
}
