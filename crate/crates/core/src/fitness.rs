//! Fitness functions and end-to-end scenario evaluation.
//!
//! * FF1: minimum distance between car and pedestrian.
//! * FF2: minimum distance between the warning area and the pedestrian.
//! * FF3: minimum time to collision, capped at [`TTC_CAP`]; the cap also
//!   stands for "never reported by the sensor".
//!
//! Minima are taken over the published (output-rate) samples.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adas::{compute_awa, run_detector, AwaSpec, DetectionEvent, DetectorConfig};
use crate::geometry::Vec2;
use crate::scene::{translate, FrameSpec, SceneConfig, TestInput};
use crate::search::Evaluator;
use crate::simulator::{
    aggregate_mode, drop_samples, simulate, AgentState, BackendConfig, BackendId, LossyChannelConfig, SimulationTrace,
    TerminationReason,
};
use crate::{derive_seed, seeded_rng, Result};

/// Upper bound for reported time to collision, in seconds.
pub const TTC_CAP: f64 = 4.0;

/// Time until `car` and `ped` come within `radius` of each other if both keep
/// their velocities; [`TTC_CAP`] when they never do (or not within the cap).
pub fn ttc(car: &AgentState, ped: &AgentState, radius: f64) -> f64 {
    let d = ped.pos - car.pos;
    let u = ped.vel - car.vel;
    let c = d.norm_sq() - radius * radius;
    if c <= 0.0 {
        return 0.0;
    }
    let a = u.norm_sq();
    let b = d.dot(u);
    if a == 0.0 || b >= 0.0 {
        return TTC_CAP;
    }
    let disc = b * b - a * c;
    if disc < 0.0 {
        return TTC_CAP;
    }
    // Smaller root of a t^2 + 2 b t + c = 0, written to avoid cancellation.
    let t = c / (-b + libm::sqrt(disc));
    t.clamp(0.0, TTC_CAP)
}

/// Distance from the pedestrian to the warning area anchored at `front`.
pub fn distance_to_awa(ped: Vec2, awa: &AwaSpec, front: Vec2) -> f64 {
    awa.distance_from(ped - front)
}

/// Which TTC series feeds FF3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TtcSource {
    /// The TTC reported by the backend's sensor (cap when unreported).
    #[default]
    Sensor,
    /// Ground-truth TTC at every sample.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub ff1: f64,
    pub ff2: f64,
    pub ff3: f64,
    pub collision: bool,
    pub detected: bool,
    pub detection_time: Option<f64>,
    pub termination: TerminationReason,
    pub backend: BackendId,
    /// The evaluated input, in the backend's frame.
    pub input: TestInput,
}

impl ScenarioOutcome {
    pub fn objectives(&self) -> [f64; 3] {
        [self.ff1, self.ff2, self.ff3]
    }
}

/// Per-sample series behind one outcome, for trace export.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRecord {
    pub trace: SimulationTrace,
    pub awa_distance: Vec<f64>,
    pub ttc: Vec<f64>,
    pub detection: DetectionEvent,
    pub outcome: ScenarioOutcome,
}

/// Everything needed to turn a test input into a [`ScenarioOutcome`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvaluator {
    pub scene: SceneConfig,
    pub backend: BackendConfig,
    pub detector: DetectorConfig,
    pub ttc_source: TtcSource,
    /// When set, each evaluation is repeated over the lossy channel and the
    /// modal fitness values are reported.
    pub channel: Option<LossyChannelConfig>,
}

impl ScenarioEvaluator {
    pub fn new(scene: SceneConfig, backend: BackendConfig, detector: DetectorConfig) -> Self {
        ScenarioEvaluator {
            scene,
            backend,
            detector,
            ttc_source: TtcSource::Sensor,
            channel: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scene.validate()?;
        self.backend.validate()?;
        self.detector.validate()?;
        if let Some(ch) = &self.channel {
            ch.validate()?;
        }
        Ok(())
    }

    /// Evaluates `input` (backend frame). `rng` is only drawn from when a
    /// channel is configured.
    pub fn evaluate<R: Rng + ?Sized>(&self, input: &TestInput, rng: &mut R) -> Result<ScenarioOutcome> {
        let trace = simulate(input, &self.scene, &self.backend)?;
        match &self.channel {
            None => Ok(self.score(input, &trace).outcome),
            Some(ch) => {
                ch.validate()?;
                let repeats: Vec<ScenarioOutcome> = (0..ch.repeats)
                    .map(|_| {
                        self.score(input, &drop_samples(&trace, ch.loss_probability, rng))
                            .outcome
                    })
                    .collect();
                aggregate_mode(&repeats, ch.precision)
            }
        }
    }

    /// Lossless evaluation keeping every per-sample series.
    pub fn record(&self, input: &TestInput) -> Result<ScenarioRecord> {
        let trace = simulate(input, &self.scene, &self.backend)?;
        Ok(self.score(input, &trace))
    }

    fn score(&self, input: &TestInput, trace: &SimulationTrace) -> ScenarioRecord {
        let scene = &self.scene;
        let detection = run_detector(trace, &self.detector);
        let radius = scene.ttc_radius();
        let mut awa_distance = Vec::with_capacity(trace.samples.len());
        let mut ttcs = Vec::with_capacity(trace.samples.len());
        let (mut ff1, mut ff2, mut ff3) = (f64::INFINITY, f64::INFINITY, TTC_CAP);
        let mut collision = false;
        for s in &trace.samples {
            let front = scene.front(s.car.pos);
            let awa = compute_awa(s.car.vel.norm(), &self.detector);
            let d_awa = distance_to_awa(s.ped.pos, &awa, front);
            let t = match self.ttc_source {
                TtcSource::Sensor => s.sensed.map_or(TTC_CAP, |o| o.ttc),
                TtcSource::Oracle => ttc(
                    &AgentState {
                        pos: front,
                        vel: s.car.vel,
                    },
                    &s.ped,
                    radius,
                ),
            };
            ff1 = ff1.min(s.distance);
            ff2 = ff2.min(d_awa);
            ff3 = ff3.min(t);
            collision |= s.collision;
            awa_distance.push(d_awa);
            ttcs.push(t);
        }
        let outcome = ScenarioOutcome {
            ff1,
            ff2,
            ff3,
            collision,
            detected: detection.detected(),
            detection_time: detection.first_detection,
            termination: trace.termination,
            backend: trace.backend,
            input: *input,
        };
        ScenarioRecord {
            trace: trace.clone(),
            awa_distance,
            ttc: ttcs,
            detection,
            outcome,
        }
    }
}

/// Search-facing evaluator.
///
/// Inputs arrive in the canonical frame and are translated into the
/// backend's native frame; the reported outcome carries the native input.
/// Evaluation `id` seeds the channel randomness, so outcomes do not depend
/// on evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalEvaluator {
    pub evaluator: ScenarioEvaluator,
    pub seed: u64,
}

impl Evaluator for CanonicalEvaluator {
    type Outcome = ScenarioOutcome;

    fn evaluate(&self, input: &TestInput, id: u64) -> Result<ScenarioOutcome> {
        let native = translate(input, &FrameSpec::CANONICAL, &self.evaluator.backend.frame);
        let mut rng = seeded_rng(derive_seed(self.seed, id));
        self.evaluator.evaluate(&native, &mut rng)
    }
}

/// Evaluates one input with an optional lossy channel.
pub fn evaluate<R: Rng + ?Sized>(
    input: &TestInput,
    backend: &BackendConfig,
    scene: &SceneConfig,
    detector: &DetectorConfig,
    channel: Option<&LossyChannelConfig>,
    rng: &mut R,
) -> Result<ScenarioOutcome> {
    let ev = ScenarioEvaluator {
        channel: channel.copied(),
        ..ScenarioEvaluator::new(*scene, *backend, *detector)
    };
    ev.evaluate(input, rng)
}
