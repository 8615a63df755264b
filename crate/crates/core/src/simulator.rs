//! Deterministic kinematic simulator backends and the lossy sample channel.
//!
//! Both backends move the car at constant speed along +x and the pedestrian
//! along its heading, and publish one [`TraceSample`] per output period. They
//! differ on purpose:
//!
//! | backend | integrator | step | gait | sensor | frame |
//! |---------|------------|------|------|--------|-------|
//! | `alpha` | forward Euler | 10 ms | straight, constant speed | 80 m, 40 deg, no latency, exact | canonical |
//! | `beta`  | semi-implicit | 5 ms | +/-10 % sinusoidal speed at 2 Hz | 60 m, 50 deg, 1 sample latency, 0.1 m grid | shifted origin, clockwise-from-+y headings, km/h |
//!
//! Traces are expressed in the backend's own frame; velocities are always m/s.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fitness::{ttc, ScenarioOutcome, TTC_CAP};
use crate::geometry::{distance_to_segment, Vec2};
use crate::scene::{FrameSpec, SceneConfig, SpeedUnit, TestInput};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendId {
    Alpha,
    Beta,
}

impl BackendId {
    pub const ALL: [BackendId; 2] = [BackendId::Alpha, BackendId::Beta];

    pub fn as_str(self) -> &'static str {
        match self {
            BackendId::Alpha => "alpha",
            BackendId::Beta => "beta",
        }
    }
}

impl fmt::Display for BackendId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Returned when parsing an unknown backend name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBackend(pub alloc::string::String);

impl fmt::Display for UnknownBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown backend `{}` (valid backends: alpha, beta)", self.0)
    }
}

impl FromStr for BackendId {
    type Err = UnknownBackend;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.trim() {
            "alpha" => Ok(BackendId::Alpha),
            "beta" => Ok(BackendId::Beta),
            other => Err(UnknownBackend(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Position advanced with the velocity at the start of the step.
    ForwardEuler,
    /// Velocity updated first, position advanced with the new velocity.
    SemiImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    pub range: f64,
    /// Full opening angle, centred on the car heading.
    pub fov_deg: f64,
    /// Reports describe the scene this many output samples ago.
    pub latency_samples: usize,
    /// Grid for reported positions; 0 disables quantization.
    pub quantization: f64,
}

/// Sinusoidal modulation of the pedestrian's walking speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitConfig {
    /// Relative amplitude, e.g. 0.1 for +/-10 %.
    pub amplitude: f64,
    pub frequency_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub id: BackendId,
    pub integrator: Integrator,
    /// Internal integration step in seconds.
    pub step: f64,
    /// Output sample period in seconds.
    pub sample_period: f64,
    pub sensor: SensorConfig,
    pub gait: GaitConfig,
    pub frame: FrameSpec,
}

impl BackendConfig {
    pub fn alpha() -> Self {
        BackendConfig {
            id: BackendId::Alpha,
            integrator: Integrator::ForwardEuler,
            step: 0.01,
            sample_period: 0.04,
            sensor: SensorConfig {
                range: 80.0,
                fov_deg: 40.0,
                latency_samples: 0,
                quantization: 0.0,
            },
            gait: GaitConfig {
                amplitude: 0.0,
                frequency_hz: 0.0,
            },
            frame: FrameSpec::CANONICAL,
        }
    }

    pub fn beta() -> Self {
        BackendConfig {
            id: BackendId::Beta,
            integrator: Integrator::SemiImplicit,
            step: 0.005,
            sample_period: 0.04,
            sensor: SensorConfig {
                range: 60.0,
                fov_deg: 50.0,
                latency_samples: 1,
                quantization: 0.1,
            },
            gait: GaitConfig {
                amplitude: 0.1,
                frequency_hz: 2.0,
            },
            frame: FrameSpec {
                origin: Vec2::new(-120.0, 7.25),
                heading_zero_deg: 90.0,
                clockwise: true,
                speed_unit: SpeedUnit::KilometersPerHour,
            },
        }
    }

    pub fn for_id(id: BackendId) -> Self {
        match id {
            BackendId::Alpha => Self::alpha(),
            BackendId::Beta => Self::beta(),
        }
    }

    /// Number of internal steps per output sample.
    pub fn substeps(&self) -> Result<usize> {
        if !(self.step > 0.0 && self.sample_period > 0.0) {
            return Err(Error::config("step and sample period must be > 0"));
        }
        if self.step > self.sample_period {
            return Err(Error::config(alloc::format!(
                "internal step {} exceeds sample period {}",
                self.step,
                self.sample_period
            )));
        }
        let ratio = self.sample_period / self.step;
        let n = libm::round(ratio);
        if (ratio - n).abs() > 1e-9 * ratio {
            return Err(Error::config(alloc::format!(
                "sample period {} is not a whole multiple of step {}",
                self.sample_period,
                self.step
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        self.substeps()?;
        self.frame.validate()?;
        let s = &self.sensor;
        if !(s.range >= 0.0) || !(s.fov_deg > 0.0 && s.fov_deg <= 360.0) || !(s.quantization >= 0.0) {
            return Err(Error::config(
                "sensor range >= 0, 0 < fov <= 360 and quantization >= 0 required",
            ));
        }
        if !(self.gait.amplitude >= 0.0 && self.gait.amplitude < 1.0) || !(self.gait.frequency_hz >= 0.0) {
            return Err(Error::config("gait amplitude must be in [0, 1) and frequency >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AgentState {
    pub pos: Vec2,
    pub vel: Vec2,
}

/// What the sensor publishes for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorObservation {
    /// Pedestrian position relative to the car's front bumper (car axes).
    pub rel_pos: Vec2,
    /// Time to collision, capped at [`TTC_CAP`].
    pub ttc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub t: f64,
    pub car: AgentState,
    pub ped: AgentState,
    /// Distance from the pedestrian centre to the car's longitudinal
    /// centre line (rear to front bumper).
    pub distance: f64,
    pub sensed: Option<SensorObservation>,
    pub collision: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    /// The car drove the full road length.
    RoadEnd,
    /// The pedestrian passed the far road edge.
    Crossed,
    /// The car's rear is beyond the pedestrian.
    Passed,
    /// The scene horizon elapsed first (only reachable with degenerate inputs).
    Horizon,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::RoadEnd => "road_end",
            TerminationReason::Crossed => "crossed",
            TerminationReason::Passed => "passed",
            TerminationReason::Horizon => "horizon",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TerminationReason {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "road_end" => Ok(TerminationReason::RoadEnd),
            "crossed" => Ok(TerminationReason::Crossed),
            "passed" => Ok(TerminationReason::Passed),
            "horizon" => Ok(TerminationReason::Horizon),
            _ => Err(()),
        }
    }
}

/// Fixed-rate output of one simulation. The termination reason belongs to
/// the final sample of the lossless trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub backend: BackendId,
    pub sample_period: f64,
    pub samples: Vec<TraceSample>,
    pub termination: TerminationReason,
}

impl SimulationTrace {
    pub fn last(&self) -> &TraceSample {
        self.samples.last().expect("traces are never empty")
    }
}

fn quantize(v: f64, grid: f64) -> f64 {
    if grid > 0.0 {
        libm::round(v / grid) * grid
    } else {
        v
    }
}

/// Instantaneous sensor reading for the given car and pedestrian states,
/// without latency.
pub fn sense(
    car: &AgentState,
    ped: &AgentState,
    scene: &SceneConfig,
    sensor: &SensorConfig,
) -> Option<SensorObservation> {
    let front = scene.front(car.pos);
    let rel = ped.pos - front;
    let dist = rel.norm();
    if dist > sensor.range {
        return None;
    }
    let bearing = libm::atan2(rel.y, rel.x).to_degrees();
    if bearing.abs() > sensor.fov_deg / 2.0 {
        return None;
    }
    let reported = Vec2::new(
        quantize(rel.x, sensor.quantization),
        quantize(rel.y, sensor.quantization),
    );
    let car_front = AgentState {
        pos: front,
        vel: car.vel,
    };
    let ped_seen = AgentState {
        pos: front + reported,
        vel: ped.vel,
    };
    Some(SensorObservation {
        rel_pos: reported,
        ttc: ttc(&car_front, &ped_seen, scene.ttc_radius()),
    })
}

/// Sensor report published with sample `index` of `history`, honouring the
/// backend's detection latency.
pub fn sensor_frame(
    history: &[TraceSample],
    index: usize,
    scene: &SceneConfig,
    cfg: &BackendConfig,
) -> Option<SensorObservation> {
    let source = index.checked_sub(cfg.sensor.latency_samples)?;
    let s = history.get(source)?;
    sense(&s.car, &s.ped, scene, &cfg.sensor)
}

/// Runs one scenario on a backend. `input` is expressed in the backend's frame.
pub fn simulate(input: &TestInput, scene: &SceneConfig, cfg: &BackendConfig) -> Result<SimulationTrace> {
    cfg.validate()?;
    scene.validate()?;
    let substeps = cfg.substeps()?;
    let frame = &cfg.frame;
    let to_mps = frame.speed_unit.in_mps();

    let car_start = frame.position_from_canonical(scene.car_origin);
    let car_vel = Vec2::new(input.v0c * to_mps, 0.0);
    let ped_dir = Vec2::from_heading_deg(frame.heading_to_canonical(input.theta_p));
    let ped_speed = input.v0p * to_mps;
    let gait = cfg.gait;
    let ped_vel_at = |t: f64| -> Vec2 {
        let m = 1.0 + gait.amplitude * libm::sin(2.0 * core::f64::consts::PI * gait.frequency_hz * t);
        ped_dir * (ped_speed * m)
    };

    let far_edge = car_start.y + scene.lane_width / 2.0;
    let mut ped_pos = Vec2::new(input.x0p, input.y0p);
    let mut samples: Vec<TraceSample> = Vec::new();
    let mut k: usize = 0;

    loop {
        let t = k as f64 * cfg.sample_period;
        let car = AgentState {
            pos: car_start + car_vel * t,
            vel: car_vel,
        };
        let ped = AgentState {
            pos: ped_pos,
            vel: ped_vel_at(t),
        };
        let footprint = scene.footprint(car.pos);
        samples.push(TraceSample {
            t,
            car,
            ped,
            distance: distance_to_segment(ped.pos, scene.rear(car.pos), scene.front(car.pos)),
            sensed: None,
            collision: footprint.distance_to(ped.pos) <= scene.pedestrian_radius,
        });
        samples[k].sensed = sensor_frame(&samples, k, scene, cfg);

        let termination = if car.pos.x - car_start.x >= scene.road_length - 1e-9 {
            Some(TerminationReason::RoadEnd)
        } else if ped.pos.y > far_edge {
            Some(TerminationReason::Crossed)
        } else if footprint.min.x > ped.pos.x + scene.pedestrian_radius {
            Some(TerminationReason::Passed)
        } else if t >= scene.horizon {
            Some(TerminationReason::Horizon)
        } else {
            None
        };
        if let Some(termination) = termination {
            return Ok(SimulationTrace {
                backend: cfg.id,
                sample_period: cfg.sample_period,
                samples,
                termination,
            });
        }

        for j in 0..substeps {
            let ts = t + j as f64 * cfg.step;
            let v = match cfg.integrator {
                Integrator::ForwardEuler => ped_vel_at(ts),
                Integrator::SemiImplicit => ped_vel_at(ts + cfg.step),
            };
            ped_pos = ped_pos + v * cfg.step;
        }
        k += 1;
    }
}

/// Message loss between simulator and detector, and its mitigation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossyChannelConfig {
    pub loss_probability: f64,
    /// Repetitions whose modal fitness values are kept.
    pub repeats: usize,
    /// Rounding grid for the mode, in fitness units.
    pub precision: f64,
}

impl Default for LossyChannelConfig {
    fn default() -> Self {
        LossyChannelConfig {
            loss_probability: 0.2,
            repeats: 20,
            precision: 0.01,
        }
    }
}

impl LossyChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.loss_probability >= 0.0 && self.loss_probability < 1.0) {
            return Err(Error::config("loss probability must be in [0, 1)"));
        }
        if self.repeats == 0 {
            return Err(Error::config("channel repeats must be >= 1"));
        }
        if !(self.precision > 0.0) {
            return Err(Error::config("mode precision must be > 0"));
        }
        Ok(())
    }
}

/// Drops each sample of `trace` independently with `loss_probability`.
///
/// If every sample would be lost, the final one is kept so the receiver
/// always observes the end of the scenario.
pub fn drop_samples<R: Rng + ?Sized>(trace: &SimulationTrace, loss_probability: f64, rng: &mut R) -> SimulationTrace {
    let mut samples: Vec<TraceSample> = trace
        .samples
        .iter()
        .filter(|_| rng.random::<f64>() >= loss_probability)
        .copied()
        .collect();
    if samples.is_empty() {
        samples.push(*trace.last());
    }
    SimulationTrace {
        samples,
        ..trace.clone()
    }
}

/// [`simulate`] followed by independent per-sample loss.
pub fn simulate_with_loss<R: Rng + ?Sized>(
    input: &TestInput,
    scene: &SceneConfig,
    cfg: &BackendConfig,
    channel: &LossyChannelConfig,
    rng: &mut R,
) -> Result<SimulationTrace> {
    channel.validate()?;
    let trace = simulate(input, scene, cfg)?;
    Ok(drop_samples(&trace, channel.loss_probability, rng))
}

/// Modal value of `values` on a grid of `precision`.
///
/// Values are binned by rounding; the most populated bin wins, ties go to the
/// lower bin, and the smallest raw value in the winning bin is returned.
fn modal_value(values: &[f64], precision: f64) -> f64 {
    let mut bins: Vec<(i64, usize, f64)> = Vec::new();
    for &v in values {
        let key = libm::round(v / precision) as i64;
        match bins.iter_mut().find(|b| b.0 == key) {
            Some(b) => {
                b.1 += 1;
                b.2 = b.2.min(v);
            }
            None => bins.push((key, 1, v)),
        }
    }
    bins.iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|b| b.2)
        .expect("non-empty")
}

/// Combines repeated evaluations of one scenario.
///
/// Each fitness value is the mode on the `precision` grid. Collision and
/// detection flags are decided by majority; ties resolve to the
/// safety-relevant side (collision, not detected).
pub fn aggregate_mode(outcomes: &[ScenarioOutcome], precision: f64) -> Result<ScenarioOutcome> {
    let first = outcomes.first().ok_or(Error::Empty("outcome list"))?;
    if outcomes.len() == 1 {
        return Ok(first.clone());
    }
    let pick = |f: fn(&ScenarioOutcome) -> f64| {
        let v: Vec<f64> = outcomes.iter().map(f).collect();
        modal_value(&v, precision)
    };
    let n = outcomes.len();
    let collisions = outcomes.iter().filter(|o| o.collision).count();
    let detections = outcomes.iter().filter(|o| o.detected).count();
    let collision = 2 * collisions >= n;
    let detected = 2 * detections > n;
    let detection_time = if detected {
        let times: Vec<f64> = outcomes.iter().filter_map(|o| o.detection_time).collect();
        Some(modal_value(&times, precision))
    } else {
        None
    };
    Ok(ScenarioOutcome {
        ff1: pick(|o| o.ff1),
        ff2: pick(|o| o.ff2),
        ff3: pick(|o| o.ff3).min(TTC_CAP),
        collision,
        detected,
        detection_time,
        ..first.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn standing(x: f64, y: f64, v0c: f64) -> TestInput {
        TestInput::new(v0c, x, y, 90.0, 0.0)
    }

    #[test]
    fn constant_car_velocity() {
        let scene = SceneConfig::default();
        let trace = simulate(&standing(80.0, -14.0, 10.0), &scene, &BackendConfig::alpha()).unwrap();
        let s = trace.samples.iter().find(|s| (s.t - 1.0).abs() < 1e-9).unwrap();
        assert!((s.car.pos.x - 10.0).abs() < 1e-9);
    }

    #[test]
    fn road_end_at_four_seconds() {
        let scene = SceneConfig {
            road_length: 100.0,
            ..Default::default()
        };
        // Pedestrian far ahead, beyond the road end, never reached.
        let trace = simulate(&standing(150.0, -14.0, 25.0), &scene, &BackendConfig::alpha()).unwrap();
        assert_eq!(trace.termination, TerminationReason::RoadEnd);
        assert!((trace.last().t - 4.0).abs() < 1e-9, "{}", trace.last().t);
    }

    #[test]
    fn timestamps_are_evenly_spaced() {
        let scene = SceneConfig::default();
        for cfg in [BackendConfig::alpha(), BackendConfig::beta()] {
            let input = crate::scene::translate(
                &TestInput::new(12.0, 40.0, -8.0, 95.0, 2.0),
                &FrameSpec::CANONICAL,
                &cfg.frame,
            );
            let trace = simulate(&input, &scene, &cfg).unwrap();
            for (k, w) in trace.samples.windows(2).enumerate() {
                assert!(w[1].t > w[0].t);
                assert!(((w[1].t - w[0].t) - cfg.sample_period).abs() < 1e-9, "gap at {k}");
                assert!(w[0].distance >= 0.0);
            }
        }
    }

    #[test]
    fn inconsistent_steps_are_rejected() {
        let mut cfg = BackendConfig::alpha();
        cfg.step = 0.03;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        cfg.step = 0.05;
        assert!(matches!(
            simulate(&standing(50.0, -5.0, 5.0), &SceneConfig::default(), &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn crossing_terminates_beyond_far_edge() {
        let scene = SceneConfig::default();
        // Slow car, fast pedestrian crossing straight over.
        let trace = simulate(
            &TestInput::new(1.0, 60.0, -3.0, 90.0, 5.0),
            &scene,
            &BackendConfig::alpha(),
        )
        .unwrap();
        assert_eq!(trace.termination, TerminationReason::Crossed);
        assert!(trace.last().ped.pos.y > scene.car_origin.y + scene.lane_width / 2.0);
    }

    #[test]
    fn passing_terminates_after_car_clears_pedestrian() {
        let scene = SceneConfig::default();
        let trace = simulate(&standing(30.0, -10.0, 20.0), &scene, &BackendConfig::alpha()).unwrap();
        assert_eq!(trace.termination, TerminationReason::Passed);
        let last = trace.last();
        assert!(scene.footprint(last.car.pos).min.x > last.ped.pos.x);
    }

    #[test]
    fn sensor_range_and_fov() {
        let scene = SceneConfig::default();
        let cfg = BackendConfig::alpha();
        let car = AgentState {
            pos: Vec2::ZERO,
            vel: Vec2::new(10.0, 0.0),
        };
        let front = scene.front(car.pos);
        let far = AgentState {
            pos: front + Vec2::new(cfg.sensor.range + 1.0, 0.0),
            vel: Vec2::ZERO,
        };
        assert!(sense(&car, &far, &scene, &cfg.sensor).is_none());
        let ahead = AgentState {
            pos: front + Vec2::new(10.0, 0.0),
            vel: Vec2::ZERO,
        };
        let obs = sense(&car, &ahead, &scene, &cfg.sensor).unwrap();
        assert_eq!(obs.rel_pos, Vec2::new(10.0, 0.0));
        assert!((obs.ttc - (10.0 - scene.ttc_radius()) / 10.0).abs() < 1e-12);
        let side = AgentState {
            pos: front + Vec2::new(2.0, -3.0),
            vel: Vec2::ZERO,
        };
        assert!(sense(&car, &side, &scene, &cfg.sensor).is_none());
    }

    #[test]
    fn beta_quantizes_reports() {
        let scene = SceneConfig::default();
        let cfg = BackendConfig::beta();
        let car = AgentState {
            pos: Vec2::ZERO,
            vel: Vec2::new(10.0, 0.0),
        };
        let ped = AgentState {
            pos: scene.front(car.pos) + Vec2::new(12.34, 0.07),
            vel: Vec2::ZERO,
        };
        let obs = sense(&car, &ped, &scene, &cfg.sensor).unwrap();
        assert!((obs.rel_pos.x - 12.3).abs() < 1e-12);
        assert!((obs.rel_pos.y - 0.1).abs() < 1e-12);
    }

    #[test]
    fn latency_delays_reports() {
        let scene = SceneConfig::default();
        let alpha = simulate(&standing(50.0, 0.0, 10.0), &scene, &BackendConfig::alpha()).unwrap();
        let mut beta_cfg = BackendConfig::alpha();
        beta_cfg.sensor.latency_samples = 1;
        let beta = simulate(&standing(50.0, 0.0, 10.0), &scene, &beta_cfg).unwrap();
        assert!(beta.samples[0].sensed.is_none());
        for k in 1..alpha.samples.len() {
            assert_eq!(beta.samples[k].sensed, alpha.samples[k - 1].sensed);
        }
    }

    #[test]
    fn lossless_channel_is_identity() {
        let scene = SceneConfig::default();
        let cfg = BackendConfig::alpha();
        let input = TestInput::new(15.0, 50.0, -6.0, 100.0, 2.5);
        let clean = simulate(&input, &scene, &cfg).unwrap();
        let channel = LossyChannelConfig {
            loss_probability: 0.0,
            ..Default::default()
        };
        let lossy = simulate_with_loss(&input, &scene, &cfg, &channel, &mut seeded_rng(3)).unwrap();
        assert_eq!(clean, lossy);
    }

    #[test]
    fn loss_rate_and_subset() {
        let scene = SceneConfig::default();
        let cfg = BackendConfig::alpha();
        // Slow car: 2500 samples per trace.
        let input = TestInput::new(1.0, 84.0, -15.0, 40.0, 1.0);
        let clean = simulate(&input, &scene, &cfg).unwrap();
        let channel = LossyChannelConfig::default();
        let mut rng = seeded_rng(11);
        let mut total = 0usize;
        let mut kept = 0usize;
        while total < 10_000 {
            let lossy = simulate_with_loss(&input, &scene, &cfg, &channel, &mut rng).unwrap();
            let mut it = clean.samples.iter();
            for s in &lossy.samples {
                assert!(it.any(|c| c.t == s.t), "surviving sample not in lossless trace");
            }
            total += clean.samples.len();
            kept += lossy.samples.len();
        }
        let dropped = 1.0 - kept as f64 / total as f64;
        assert!((dropped - 0.2).abs() < 0.01, "dropped {dropped}");
    }

    fn outcome(ff: f64) -> ScenarioOutcome {
        ScenarioOutcome {
            ff1: ff,
            ff2: ff,
            ff3: ff,
            collision: false,
            detected: false,
            detection_time: None,
            termination: TerminationReason::Passed,
            backend: BackendId::Alpha,
            input: TestInput::new(1.0, 1.0, 1.0, 1.0, 1.0),
        }
    }

    #[test]
    fn mode_examples() {
        let m = aggregate_mode(&[outcome(2.0), outcome(2.0), outcome(2.01)], 0.01).unwrap();
        assert_eq!(m.ff1, 2.0);
        let single = outcome(1.234_567);
        assert_eq!(aggregate_mode(core::slice::from_ref(&single), 0.01).unwrap(), single);
        let tie = aggregate_mode(&[outcome(2.0), outcome(1.0)], 0.01).unwrap();
        assert_eq!(tie.ff1, 1.0);
        assert!(matches!(aggregate_mode(&[], 0.01), Err(Error::Empty(_))));
    }

    #[test]
    fn flag_ties_favour_safety_relevant_side() {
        let mut a = outcome(1.0);
        a.collision = true;
        a.detected = true;
        a.detection_time = Some(1.0);
        let b = outcome(1.0);
        let m = aggregate_mode(&[a.clone(), b.clone()], 0.01).unwrap();
        assert!(m.collision);
        assert!(!m.detected);
        assert_eq!(m.detection_time, None);
        let m = aggregate_mode(&[a.clone(), a, b], 0.01).unwrap();
        assert!(m.detected);
        assert_eq!(m.detection_time, Some(1.0));
    }
}
