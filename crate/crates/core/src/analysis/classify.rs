use serde::{Deserialize, Serialize};

use crate::fitness::ScenarioOutcome;

/// Near miss when the car gets at least this close (m).
pub const NEAR_MISS_FF1: f64 = 1.0;
/// Near miss when the time to collision drops to at most this (s).
pub const NEAR_MISS_FF3: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedScenario {
    pub outcome: ScenarioOutcome,
    /// Collision or near miss.
    pub critical: bool,
    /// Critical and the pedestrian was never detected.
    pub violation: bool,
}

pub fn classify(outcome: &ScenarioOutcome) -> ClassifiedScenario {
    let critical = outcome.collision || outcome.ff1 <= NEAR_MISS_FF1 || outcome.ff3 <= NEAR_MISS_FF3;
    ClassifiedScenario {
        outcome: outcome.clone(),
        critical,
        violation: critical && !outcome.detected,
    }
}
