//! Uniformly clocked control waveforms.
//!
//! A schedule is rendered to per-sample channel values at a fixed rate
//! (1 GSa/s by default, matching the waveform generator clock): drive
//! components (omega_x, omega_y, omega_z) for the single-qubit paths and the
//! detuning channel for two-qubit paths. Samples are taken at the midpoints
//! (i + 1/2) / rate, so holds render piecewise constant and ramps linear.

use crate::error::Error;
use crate::matrix::{pauli_components, Operator};
use crate::model;
use crate::path::{DrivenPath, PathModel};
use crate::schedule::PathKind;
use crate::units;
use crate::Result;

pub const DEFAULT_SAMPLE_RATE: f64 = 1e9;

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub name: String,
    /// rad/s values (drive components or detuning).
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveformTrace {
    pub sample_rate: f64,
    pub channels: Vec<Channel>,
}

impl WaveformTrace {
    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, |c| c.samples.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration(&self) -> f64 {
        self.len() as f64 / self.sample_rate
    }

    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    fn validate(&self) -> Result<()> {
        if !(self.sample_rate > 0.0) {
            return Err(Error::InvalidWaveform("sample rate must be positive".into()));
        }
        let m = self.len();
        if self.channels.iter().any(|c| c.samples.len() != m) {
            return Err(Error::InvalidWaveform("channels have unequal lengths".into()));
        }
        Ok(())
    }

    /// CSV export: time_ns column then one column per channel in linear MHz.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        let names: Vec<&str> = self.channels.iter().map(|c| c.name.as_str()).collect();
        writeln!(w, "time_ns,{}", names.join(","))?;
        for i in 0..self.len() {
            let t_ns = units::s_to_ns((i as f64 + 0.5) / self.sample_rate);
            let mut row = format!("{t_ns}");
            for c in &self.channels {
                row.push(',');
                row.push_str(&format!("{}", units::rad_to_mhz(c.samples[i])));
            }
            writeln!(w, "{row}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: std::io::BufRead>(r: R, sample_rate: f64) -> Result<WaveformTrace> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidWaveform("empty csv".into()))??;
        let names: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        if names.is_empty() {
            return Err(Error::InvalidWaveform("csv has no channel columns".into()));
        }
        let mut channels: Vec<Channel> =
            names.into_iter().map(|name| Channel { name, samples: Vec::new() }).collect();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != channels.len() + 1 {
                return Err(Error::InvalidWaveform(format!("malformed csv row: {line}")));
            }
            for (c, f) in channels.iter_mut().zip(fields.iter().skip(1)) {
                let mhz_val: f64 = f
                    .parse()
                    .map_err(|_| Error::InvalidWaveform(format!("bad value `{f}`")))?;
                c.samples.push(units::mhz(mhz_val));
            }
        }
        let trace = WaveformTrace { sample_rate, channels };
        trace.validate()?;
        Ok(trace)
    }
}

/// Render a driven path to a waveform at the given sample rate.
pub fn sample_schedule(path: &DrivenPath, sample_rate: f64) -> Result<WaveformTrace> {
    if !(sample_rate > 0.0) {
        return Err(Error::InvalidWaveform("sample rate must be positive".into()));
    }
    let total = path.schedule.total_duration();
    let m = (total * sample_rate).round() as usize;
    if m == 0 {
        return Err(Error::InvalidWaveform(
            "schedule shorter than one sample at this rate".into(),
        ));
    }
    match path.model {
        PathModel::SingleQubit { .. } => {
            let mut x = Vec::with_capacity(m);
            let mut y = Vec::with_capacity(m);
            let mut z = Vec::with_capacity(m);
            for i in 0..m {
                let t = (i as f64 + 0.5) / sample_rate;
                let h = path.hamiltonian_at_time(t)?;
                let comps = pauli_components(&h)?;
                x.push(comps.x);
                y.push(comps.y);
                z.push(comps.z);
            }
            Ok(WaveformTrace {
                sample_rate,
                channels: vec![
                    Channel { name: "omega_x".into(), samples: x },
                    Channel { name: "omega_y".into(), samples: y },
                    Channel { name: "omega_z".into(), samples: z },
                ],
            })
        }
        PathModel::TwoQubit { j } => {
            let mut delta = Vec::with_capacity(m);
            for i in 0..m {
                let t = (i as f64 + 0.5) / sample_rate;
                let lam = path.schedule.lambda_at(t);
                let d = match path.schedule.kind {
                    PathKind::TwoQubitVarphi => model::delta_for_varphi(lam, j),
                    PathKind::LztDelta => lam,
                    PathKind::Iswap => 0.0,
                    _ => unreachable!("validated in DrivenPath::new"),
                };
                delta.push(d);
            }
            Ok(WaveformTrace {
                sample_rate,
                channels: vec![Channel { name: "delta".into(), samples: delta }],
            })
        }
    }
}

/// Rebuild the per-sample Hamiltonian sequence from a trace. Each sample is
/// one piecewise-constant step of duration 1/sample_rate.
pub fn hamiltonian_steps(trace: &WaveformTrace, model: PathModel) -> Result<Vec<(Operator, f64)>> {
    trace.validate()?;
    let dt = 1.0 / trace.sample_rate;
    match model {
        PathModel::SingleQubit { .. } => {
            let x = trace
                .channel("omega_x")
                .ok_or_else(|| Error::InvalidWaveform("missing omega_x channel".into()))?;
            let y = trace
                .channel("omega_y")
                .ok_or_else(|| Error::InvalidWaveform("missing omega_y channel".into()))?;
            let z = trace
                .channel("omega_z")
                .ok_or_else(|| Error::InvalidWaveform("missing omega_z channel".into()))?;
            Ok((0..trace.len())
                .map(|i| {
                    let comps = crate::matrix::PauliComponents {
                        identity: 0.0,
                        x: x.samples[i],
                        y: y.samples[i],
                        z: z.samples[i],
                    };
                    (comps.reassemble(), dt)
                })
                .collect())
        }
        PathModel::TwoQubit { j } => {
            let d = trace
                .channel("delta")
                .ok_or_else(|| Error::InvalidWaveform("missing delta channel".into()))?;
            d.samples
                .iter()
                .map(|&delta| Ok((model::h2_from_delta(delta, j)?, dt)))
                .collect()
        }
    }
}

/// Channels that carry injected control noise for each path kind: the drive
/// quadratures for single-qubit paths, the detuning for two-qubit paths.
pub fn noisy_channels(kind: PathKind) -> &'static [&'static str] {
    match kind {
        PathKind::Latitude | PathKind::Longitude => &["omega_x", "omega_y"],
        PathKind::TwoQubitVarphi | PathKind::LztDelta | PathKind::Iswap => &["delta"],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::jumping_schedule;
    use crate::units::mhz;
    use std::f64::consts::PI;

    fn latitude_path() -> DrivenPath {
        let s = jumping_schedule(-PI, 0.0, 5, 1.0, 250e-9, PathKind::Latitude).unwrap();
        DrivenPath::new(s, PathModel::SingleQubit { omega0: mhz(10.0) }).unwrap()
    }

    #[test]
    fn latitude_trace_has_five_plateaus_on_circle() {
        let trace = sample_schedule(&latitude_path(), 1e9).unwrap();
        assert_eq!(trace.len(), 250);
        let x = trace.channel("omega_x").unwrap();
        let y = trace.channel("omega_y").unwrap();
        let z = trace.channel("omega_z").unwrap();
        let r = 0.5 * mhz(10.0);
        for i in 0..250 {
            assert!(z.samples[i].abs() < 1e-14 * r);
            let mag = (x.samples[i].powi(2) + y.samples[i].powi(2)).sqrt();
            assert!((mag - r).abs() < 1e-6 * r);
        }
        // piecewise constant: 5 plateaus of 50 samples
        for k in 0..5 {
            let v0 = x.samples[k * 50];
            for i in 0..50 {
                assert_eq!(x.samples[k * 50 + i], v0);
            }
        }
        assert_ne!(x.samples[0], x.samples[50]);
    }

    #[test]
    fn constant_hold_gives_constant_channels() {
        let s = crate::schedule::iswap_schedule(mhz(9.2), 27e-9).unwrap();
        let p = DrivenPath::new(s, PathModel::TwoQubit { j: mhz(9.2) }).unwrap();
        let trace = sample_schedule(&p, 1e9).unwrap();
        assert_eq!(trace.len(), 27);
        let d = trace.channel("delta").unwrap();
        assert!(d.samples.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sample_count_is_rounded_duration() {
        let s = jumping_schedule(-PI, 0.0, 5, 1.0, 87.9366e-9, PathKind::Latitude).unwrap();
        let p = DrivenPath::new(s, PathModel::SingleQubit { omega0: mhz(10.0) }).unwrap();
        let trace = sample_schedule(&p, 1e9).unwrap();
        assert_eq!(trace.len(), 88);
    }

    #[test]
    fn too_short_schedule_rejected() {
        let s = jumping_schedule(-PI, 0.0, 1, 1.0, 0.2e-9, PathKind::Latitude).unwrap();
        let p = DrivenPath::new(s, PathModel::SingleQubit { omega0: mhz(10.0) }).unwrap();
        assert!(sample_schedule(&p, 1e9).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let trace = sample_schedule(&latitude_path(), 1e9).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let back = WaveformTrace::read_csv(std::io::BufReader::new(&buf[..]), 1e9).unwrap();
        assert_eq!(back.len(), trace.len());
        for (a, b) in back.channels.iter().zip(trace.channels.iter()) {
            assert_eq!(a.name, b.name);
            for (x, y) in a.samples.iter().zip(b.samples.iter()) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn steps_rebuild_hamiltonian() {
        let p = latitude_path();
        let trace = sample_schedule(&p, 1e9).unwrap();
        let steps = hamiltonian_steps(&trace, p.model).unwrap();
        assert_eq!(steps.len(), 250);
        let h0 = p.hamiltonian_at_time(0.5e-9).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((steps[0].0[(i, j)] - h0[(i, j)]).norm() < 1e-6);
            }
        }
    }
}
