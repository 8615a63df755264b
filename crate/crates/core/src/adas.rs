//! The warning function under test.
//!
//! A pedestrian reported by the sensor triggers a warning when it lies in, or
//! within `margin` of, the acute warning area (AWA) ahead of the car and the
//! reported time to collision is below the threshold. The detector only
//! observes; it never acts on the car.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geometry::{Rect, Vec2};
use crate::simulator::{SensorObservation, SimulationTrace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Distance from the AWA boundary still counted as "near".
    pub margin: f64,
    pub ttc_threshold: f64,
    /// AWA length grows by this many seconds of travel.
    pub headway: f64,
    pub base_length: f64,
    pub awa_width: f64,
    /// Lateral offset of the AWA centre from the car axis (left positive).
    pub lateral_offset: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            margin: 0.2,
            ttc_threshold: 4.0,
            headway: 1.4,
            base_length: 5.0,
            awa_width: 3.5,
            lateral_offset: 0.0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.margin >= 0.0) || !(self.ttc_threshold > 0.0) {
            return Err(crate::Error::config(
                "detector margin must be >= 0 and TTC threshold > 0",
            ));
        }
        if !(self.base_length > 0.0) || !(self.headway >= 0.0) || !(self.awa_width > 0.0) {
            return Err(crate::Error::config(
                "AWA base length and width must be > 0, headway >= 0",
            ));
        }
        Ok(())
    }
}

/// Warning area, in coordinates relative to the car's front bumper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwaSpec {
    pub length: f64,
    pub width: f64,
    pub lateral_offset: f64,
}

impl AwaSpec {
    pub fn rect(&self) -> Rect {
        Rect::new(
            Vec2::new(0.0, self.lateral_offset - self.width / 2.0),
            Vec2::new(self.length, self.lateral_offset + self.width / 2.0),
        )
    }

    /// Distance of a point given relative to the front bumper; 0 inside.
    pub fn distance_from(&self, rel: Vec2) -> f64 {
        self.rect().distance_to(rel)
    }
}

pub fn compute_awa(speed: f64, cfg: &DetectorConfig) -> AwaSpec {
    AwaSpec {
        length: cfg.base_length + cfg.headway * speed.max(0.0),
        width: cfg.awa_width,
        lateral_offset: cfg.lateral_offset,
    }
}

/// Confirms that a reported object is a pedestrian before warning.
pub trait ObjectClassifier {
    fn is_pedestrian(&self, obs: &SensorObservation) -> bool;
}

/// The scene holds a single object, so every report is a pedestrian.
#[derive(Debug, Clone, Copy, Default)]
pub struct SinglePedestrianScene;

impl ObjectClassifier for SinglePedestrianScene {
    fn is_pedestrian(&self, _obs: &SensorObservation) -> bool {
        true
    }
}

pub fn detect(obs: Option<&SensorObservation>, awa: &AwaSpec, cfg: &DetectorConfig) -> bool {
    match obs {
        Some(o) => awa.distance_from(o.rel_pos) <= cfg.margin && o.ttc < cfg.ttc_threshold,
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub first_detection: Option<f64>,
    /// Latched warning state per sample: set from the first detection on.
    pub warnings: Vec<bool>,
}

impl DetectionEvent {
    pub fn detected(&self) -> bool {
        self.first_detection.is_some()
    }
}

pub fn run_detector(trace: &SimulationTrace, cfg: &DetectorConfig) -> DetectionEvent {
    run_detector_with(trace, cfg, &SinglePedestrianScene)
}

pub fn run_detector_with<C: ObjectClassifier + ?Sized>(
    trace: &SimulationTrace,
    cfg: &DetectorConfig,
    classifier: &C,
) -> DetectionEvent {
    let mut first_detection = None;
    let mut warnings = Vec::with_capacity(trace.samples.len());
    for s in &trace.samples {
        if first_detection.is_none() {
            let awa = compute_awa(s.car.vel.norm(), cfg);
            let obs = s.sensed.as_ref().filter(|o| classifier.is_pedestrian(o));
            if detect(obs, &awa, cfg) {
                first_detection = Some(s.t);
            }
        }
        warnings.push(first_detection.is_some());
    }
    DetectionEvent {
        first_detection,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{SceneConfig, TestInput};
    use crate::simulator::{simulate, BackendConfig};
    use proptest::prelude::*;

    #[test]
    fn awa_length() {
        let cfg = DetectorConfig {
            base_length: 5.0,
            headway: 1.4,
            ..Default::default()
        };
        assert_eq!(compute_awa(0.0, &cfg).length, 5.0);
        assert!((compute_awa(10.0, &cfg).length - 19.0).abs() < 1e-12);
        assert!(compute_awa(25.0, &cfg).length > compute_awa(1.0, &cfg).length);
    }

    #[test]
    fn detect_rules() {
        let cfg = DetectorConfig::default();
        let awa = compute_awa(10.0, &cfg);
        assert!(!detect(None, &awa, &cfg));
        let centre = SensorObservation {
            rel_pos: awa.rect().center(),
            ttc: 1.0,
        };
        assert!(detect(Some(&centre), &awa, &cfg));
        let outside = SensorObservation {
            rel_pos: Vec2::new(awa.length + 0.3, 0.0),
            ttc: 1.0,
        };
        assert!(!detect(Some(&outside), &awa, &cfg));
        let near = SensorObservation {
            rel_pos: Vec2::new(awa.length + 0.15, 0.0),
            ttc: 1.0,
        };
        assert!(detect(Some(&near), &awa, &cfg));
        let slow = SensorObservation { ttc: 4.0, ..centre };
        assert!(!detect(Some(&slow), &awa, &cfg));
    }

    #[test]
    fn pedestrian_out_of_sensor_range_is_never_detected() {
        let scene = SceneConfig::default();
        // Far to the side, walking away from the road.
        let input = TestInput::new(20.0, 84.0, -15.0, 270.0, 1.0);
        let trace = simulate(&input, &scene, &BackendConfig::alpha()).unwrap();
        let ev = run_detector(&trace, &DetectorConfig::default());
        assert!(ev.first_detection.is_none());
        assert!(ev.warnings.iter().all(|w| !w));
    }

    #[test]
    fn latency_shifts_first_detection_by_one_sample() {
        let scene = SceneConfig::default();
        let input = TestInput::new(10.0, 40.0, -2.5, 90.0, 1.0);
        let alpha = BackendConfig::alpha();
        let mut delayed = alpha;
        delayed.sensor.latency_samples = 1;
        let cfg = DetectorConfig::default();
        let a = run_detector(&simulate(&input, &scene, &alpha).unwrap(), &cfg);
        let b = run_detector(&simulate(&input, &scene, &delayed).unwrap(), &cfg);
        let ta = a.first_detection.expect("alpha detects");
        let tb = b.first_detection.expect("delayed detects");
        assert!((tb - ta - alpha.sample_period).abs() < 1e-9, "{ta} {tb}");
    }

    #[test]
    fn detector_leaves_trace_untouched() {
        let scene = SceneConfig::default();
        let trace = simulate(
            &TestInput::new(10.0, 40.0, -2.5, 90.0, 1.0),
            &scene,
            &BackendConfig::beta(),
        )
        .unwrap();
        let before = trace.clone();
        let _ = run_detector(&trace, &DetectorConfig::default());
        assert_eq!(trace, before);
    }

    proptest! {
        #[test]
        fn larger_margin_never_removes_a_warning(
            x in -5.0..40.0f64, y in -6.0..6.0f64, ttc in 0.0..5.0f64,
            speed in 0.0..25.0f64, m1 in 0.0..2.0f64, extra in 0.0..2.0f64,
        ) {
            let small = DetectorConfig { margin: m1, ..Default::default() };
            let large = DetectorConfig { margin: m1 + extra, ..Default::default() };
            let obs = SensorObservation { rel_pos: Vec2::new(x, y), ttc };
            let awa = compute_awa(speed, &small);
            prop_assert!(!detect(Some(&obs), &awa, &small) || detect(Some(&obs), &awa, &large));
        }
    }
}
