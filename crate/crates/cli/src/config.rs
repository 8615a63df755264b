//! Plain-text campaign configuration.
//!
//! One `section.key = value` assignment per line; `#` starts a comment.
//! Ranges are written `lo, hi`. Every key is optional; see the README for
//! the full list and defaults.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use xsim_core::adas::DetectorConfig;
use xsim_core::fitness::{ScenarioEvaluator, TtcSource};
use xsim_core::geometry::Vec2;
use xsim_core::scene::{InputSpace, Range, SceneConfig, SpeedUnit};
use xsim_core::search::SearchConfig;
use xsim_core::simulator::{BackendConfig, BackendId, Integrator, LossyChannelConfig};

use crate::error::{CliError, CliResult};

/// Desk-scale repetition count; the full-scale experiment uses 40.
pub const DEFAULT_RUNS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Nsga2,
    Random,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Random => "random",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nsga2" => Ok(Algorithm::Nsga2),
            "random" => Ok(Algorithm::Random),
            _ => Err(format!("unknown algorithm `{s}` (valid algorithms: nsga2, random)")),
        }
    }
}

/// Input ranges with positions relative to the car's initial position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeSpace {
    pub v0c: Range,
    pub x0p: Range,
    pub y0p: Range,
    pub theta_p: Range,
    pub v0p: Range,
}

impl Default for RelativeSpace {
    fn default() -> Self {
        RelativeSpace {
            v0c: Range::new(1.0, 25.0),
            x0p: Range::new(20.0, 85.0),
            y0p: Range::new(-15.0, -2.0),
            theta_p: Range::new(40.0, 160.0),
            v0p: Range::new(1.0, 5.0),
        }
    }
}

impl RelativeSpace {
    pub fn absolute(&self, car_origin: Vec2) -> InputSpace {
        InputSpace::relative_to(car_origin, self.v0c, self.x0p, self.y0p, self.theta_p, self.v0p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub runs: usize,
    pub seed: u64,
    pub backend: BackendId,
    pub algorithm: Algorithm,
    /// Not part of the recorded configuration: the same campaign written to
    /// two directories yields identical artifacts.
    #[serde(skip)]
    pub output: PathBuf,
    pub record_generations: bool,
    /// Optional wall-clock cap per run. Makes results timing dependent.
    pub time_limit_s: Option<f64>,
    pub search: SearchConfig,
    pub scene: SceneConfig,
    pub space: RelativeSpace,
    pub detector: DetectorConfig,
    pub ttc_source: TtcSource,
    pub channel: Option<LossyChannelConfig>,
    pub alpha: BackendConfig,
    pub beta: BackendConfig,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            runs: DEFAULT_RUNS,
            seed: 0,
            backend: BackendId::Alpha,
            algorithm: Algorithm::Nsga2,
            output: PathBuf::from("xsim-out"),
            record_generations: true,
            time_limit_s: None,
            search: SearchConfig::default(),
            scene: SceneConfig::default(),
            space: RelativeSpace::default(),
            detector: DetectorConfig::default(),
            ttc_source: TtcSource::Sensor,
            channel: None,
            alpha: BackendConfig::alpha(),
            beta: BackendConfig::beta(),
        }
    }
}

/// One `key = value` assignment and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub origin: String,
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl Entry {
    fn error(&self, message: impl Into<String>) -> CliError {
        CliError::ConfigParse {
            origin: self.origin.clone(),
            line: self.line,
            message: message.into(),
        }
    }

    fn parse<T: FromStr>(&self, what: &str) -> CliResult<T> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("`{}` expects {what}, got `{}`", self.key, self.value)))
    }

    fn f64(&self) -> CliResult<f64> {
        let v: f64 = self.parse("a number")?;
        if !v.is_finite() {
            return Err(self.error(format!("`{}` must be finite", self.key)));
        }
        Ok(v)
    }

    fn bool(&self) -> CliResult<bool> {
        self.parse("true or false")
    }

    fn range(&self) -> CliResult<Range> {
        let parts: Vec<&str> = self.value.split(',').map(str::trim).collect();
        let bad = || self.error(format!("`{}` expects a range `lo, hi`, got `{}`", self.key, self.value));
        if parts.len() != 2 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(self.error(format!("`{}`: need finite lo <= hi, got `{}`", self.key, self.value)));
        }
        Ok(Range::new(lo, hi))
    }
}

/// Splits a config text into entries. `origin` labels error messages.
pub fn parse_entries(text: &str, origin: &str) -> CliResult<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CliError::ConfigParse {
            origin: origin.to_string(),
            line: i + 1,
            message,
        };
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(format!("expected `section.key = value`, got `{line}`")));
        };
        let key = key.trim();
        if !key.contains('.') {
            return Err(err(format!("key `{key}` has no section")));
        }
        if out.iter().any(|e: &Entry| e.key == key && e.origin == origin) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        out.push(Entry {
            origin: origin.to_string(),
            line: i + 1,
            key: key.to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

/// Parses `--set key=value` overrides; `line` is the override's position.
pub fn parse_overrides(overrides: &[String]) -> CliResult<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, o) in overrides.iter().enumerate() {
        let parsed = parse_entries(o, "--set").map_err(|e| match e {
            CliError::ConfigParse { origin, message, .. } => CliError::ConfigParse {
                origin,
                line: i + 1,
                message,
            },
            other => other,
        })?;
        out.extend(parsed.into_iter().map(|e| Entry { line: i + 1, ..e }));
    }
    Ok(out)
}

impl CampaignConfig {
    /// Reads `path` (if given) and applies `overrides` on top.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> CliResult<Self> {
        let mut entries = Vec::new();
        if let Some(p) = path {
            let text =
                fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            entries = parse_entries(&text, &p.display().to_string())?;
        }
        entries.extend(parse_overrides(overrides)?);
        Self::from_entries(&entries)
    }

    pub fn from_entries(entries: &[Entry]) -> CliResult<Self> {
        let mut c = CampaignConfig::default();
        let mut channel_enabled = false;
        let mut channel = LossyChannelConfig::default();
        for e in entries {
            let (section, key) = e.key.split_once('.').expect("checked by the parser");
            match (section, key) {
                ("campaign", "runs") => c.runs = e.parse("a positive integer")?,
                ("campaign", "seed") => c.seed = e.parse("an unsigned integer")?,
                ("campaign", "backend") => c.backend = e.value.parse().map_err(|err| e.error(format!("{err}")))?,
                ("campaign", "algorithm") => c.algorithm = e.value.parse().map_err(|err: String| e.error(err))?,
                ("campaign", "output") => c.output = PathBuf::from(&e.value),
                ("campaign", "record_generations") => c.record_generations = e.bool()?,
                ("campaign", "time_limit_s") => c.time_limit_s = Some(e.f64()?),

                ("search", "population") => c.search.population_size = e.parse("a positive integer")?,
                ("search", "budget") => c.search.budget = e.parse("a positive integer")?,
                ("search", "crossover_rate") => c.search.crossover_rate = e.f64()?,
                ("search", "mutation_rate") => c.search.mutation_rate = e.f64()?,
                ("search", "eta") => c.search.eta = e.f64()?,
                ("search", "sigma_fraction") => c.search.sigma_fraction = e.f64()?,
                ("search", "objectives") => c.search.objective_mask = parse_objectives(e)?,

                ("scene", "car_x") => c.scene.car_origin.x = e.f64()?,
                ("scene", "car_y") => c.scene.car_origin.y = e.f64()?,
                ("scene", "road_length") => c.scene.road_length = e.f64()?,
                ("scene", "lane_width") => c.scene.lane_width = e.f64()?,
                ("scene", "car_length") => c.scene.car_length = e.f64()?,
                ("scene", "car_width") => c.scene.car_width = e.f64()?,
                ("scene", "car_center_offset") => c.scene.car_center_offset = e.f64()?,
                ("scene", "pedestrian_radius") => c.scene.pedestrian_radius = e.f64()?,
                ("scene", "horizon") => c.scene.horizon = e.f64()?,

                ("space", "v0c") => c.space.v0c = e.range()?,
                ("space", "x0p") => c.space.x0p = e.range()?,
                ("space", "y0p") => c.space.y0p = e.range()?,
                ("space", "theta_p") => c.space.theta_p = e.range()?,
                ("space", "v0p") => c.space.v0p = e.range()?,

                ("detector", "margin") => c.detector.margin = e.f64()?,
                ("detector", "ttc_threshold") => c.detector.ttc_threshold = e.f64()?,
                ("detector", "headway") => c.detector.headway = e.f64()?,
                ("detector", "base_length") => c.detector.base_length = e.f64()?,
                ("detector", "awa_width") => c.detector.awa_width = e.f64()?,
                ("detector", "lateral_offset") => c.detector.lateral_offset = e.f64()?,
                ("detector", "ttc_source") => {
                    c.ttc_source = match e.value.as_str() {
                        "sensor" => TtcSource::Sensor,
                        "oracle" => TtcSource::Oracle,
                        v => return Err(e.error(format!("unknown TTC source `{v}` (valid: sensor, oracle)"))),
                    }
                }

                ("channel", "enabled") => channel_enabled = e.bool()?,
                ("channel", "loss_probability") => channel.loss_probability = e.f64()?,
                ("channel", "repeats") => channel.repeats = e.parse("a positive integer")?,
                ("channel", "precision") => channel.precision = e.f64()?,

                ("backend", rest) => {
                    let (id, key) = rest
                        .split_once('.')
                        .ok_or_else(|| e.error(format!("expected `backend.<id>.<key>`, got `{}`", e.key)))?;
                    let id: BackendId = id.parse().map_err(|err| e.error(format!("{err}")))?;
                    let b = match id {
                        BackendId::Alpha => &mut c.alpha,
                        BackendId::Beta => &mut c.beta,
                    };
                    apply_backend_key(b, key, e)?;
                }
                _ => return Err(e.error(format!("unknown key `{}`", e.key))),
            }
        }
        c.channel = channel_enabled.then_some(channel);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.runs == 0 {
            return Err(CliError::Config("campaign.runs must be >= 1".into()));
        }
        if let Some(t) = self.time_limit_s {
            if t <= 0.0 {
                return Err(CliError::Config("campaign.time_limit_s must be > 0".into()));
            }
        }
        if self.algorithm == Algorithm::Nsga2 {
            self.search.validate()?;
        } else if self.search.budget == 0 || self.search.population_size == 0 {
            return Err(CliError::Config(
                "search.budget and search.population must be >= 1".into(),
            ));
        }
        self.input_space().validate()?;
        for id in BackendId::ALL {
            self.evaluator(id).validate()?;
        }
        Ok(())
    }

    pub fn backend_config(&self, id: BackendId) -> BackendConfig {
        match id {
            BackendId::Alpha => self.alpha,
            BackendId::Beta => self.beta,
        }
    }

    /// The canonical-frame search space.
    pub fn input_space(&self) -> InputSpace {
        self.space.absolute(self.scene.car_origin)
    }

    pub fn evaluator(&self, id: BackendId) -> ScenarioEvaluator {
        ScenarioEvaluator {
            ttc_source: self.ttc_source,
            channel: self.channel,
            ..ScenarioEvaluator::new(self.scene, self.backend_config(id), self.detector)
        }
    }
}

fn parse_objectives(e: &Entry) -> CliResult<[bool; 3]> {
    let mut mask = [false; 3];
    for name in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i = match name {
            "ff1" => 0,
            "ff2" => 1,
            "ff3" => 2,
            _ => return Err(e.error(format!("unknown objective `{name}` (valid: ff1, ff2, ff3)"))),
        };
        mask[i] = true;
    }
    if !mask.iter().any(|&m| m) {
        return Err(e.error("at least one objective is required"));
    }
    Ok(mask)
}

fn apply_backend_key(b: &mut BackendConfig, key: &str, e: &Entry) -> CliResult<()> {
    match key {
        "integrator" => {
            b.integrator = match e.value.as_str() {
                "forward_euler" => Integrator::ForwardEuler,
                "semi_implicit" => Integrator::SemiImplicit,
                v => {
                    return Err(e.error(format!(
                        "unknown integrator `{v}` (valid: forward_euler, semi_implicit)"
                    )))
                }
            }
        }
        "step" => b.step = e.f64()?,
        "sample_period" => b.sample_period = e.f64()?,
        "sensor_range" => b.sensor.range = e.f64()?,
        "sensor_fov_deg" => b.sensor.fov_deg = e.f64()?,
        "sensor_latency_samples" => b.sensor.latency_samples = e.parse("a non-negative integer")?,
        "sensor_quantization" => b.sensor.quantization = e.f64()?,
        "gait_amplitude" => b.gait.amplitude = e.f64()?,
        "gait_frequency_hz" => b.gait.frequency_hz = e.f64()?,
        "frame_origin_x" => b.frame.origin.x = e.f64()?,
        "frame_origin_y" => b.frame.origin.y = e.f64()?,
        "frame_heading_zero_deg" => b.frame.heading_zero_deg = e.f64()?,
        "frame_clockwise" => b.frame.clockwise = e.bool()?,
        "frame_speed_unit" => {
            b.frame.speed_unit = match e.value.as_str() {
                "mps" => SpeedUnit::MetersPerSecond,
                "kmh" => SpeedUnit::KilometersPerHour,
                v => return Err(e.error(format!("unknown speed unit `{v}` (valid: mps, kmh)"))),
            }
        }
        _ => return Err(e.error(format!("unknown key `{}`", e.key))),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> CliResult<CampaignConfig> {
        CampaignConfig::from_entries(&parse_entries(text, "test.cfg")?)
    }

    #[test]
    fn empty_config_gives_defaults() {
        assert_eq!(load("# nothing\n\n").unwrap(), CampaignConfig::default());
    }

    #[test]
    fn keys_are_applied() {
        let c = load(
            "campaign.runs = 3\ncampaign.backend = beta\nsearch.budget = 50 # inline comment\n\
             space.v0c = 2, 20\nchannel.enabled = true\nchannel.repeats = 5\nbackend.beta.sensor_range = 70\n\
             detector.ttc_source = oracle\nsearch.objectives = ff1, ff3\n",
        )
        .unwrap();
        assert_eq!(c.runs, 3);
        assert_eq!(c.backend, BackendId::Beta);
        assert_eq!(c.search.budget, 50);
        assert_eq!(c.space.v0c, Range::new(2.0, 20.0));
        assert_eq!(c.channel.unwrap().repeats, 5);
        assert_eq!(c.beta.sensor.range, 70.0);
        assert_eq!(c.ttc_source, TtcSource::Oracle);
        assert_eq!(c.search.objective_mask, [true, false, true]);
    }

    #[test]
    fn space_follows_car_origin() {
        let c = load("space.x0p = 10, 20\nscene.car_x = 5\n").unwrap();
        assert_eq!(c.input_space().x0p, Range::new(15.0, 25.0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = load("campaign.runs = 2\n\ncampaign.backend = gamma\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.starts_with("test.cfg:3:"), "{msg}");
        assert!(msg.contains("alpha, beta"));
        assert_eq!(e.exit_code(), 2);

        assert!(load("campaign.runs 2").unwrap_err().to_string().contains(":1:"));
        assert!(load("nosection = 1").is_err());
        assert!(load("scene.road_length = abc").is_err());
        assert!(load("space.v0c = 5, 1").is_err());
        assert!(load("campaign.runs = 1\ncampaign.runs = 2")
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        assert!(load("backend.gamma.step = 0.1").is_err());
        assert!(load("scene.colour = red").is_err());
    }

    #[test]
    fn semantic_errors_are_config_errors() {
        assert_eq!(load("search.budget = 4").unwrap_err().exit_code(), 2);
        assert_eq!(load("campaign.runs = 0").unwrap_err().exit_code(), 2);
        assert_eq!(load("search.population = 7").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn overrides_win() {
        let mut entries = parse_entries("campaign.runs = 2\n", "f").unwrap();
        entries.extend(parse_overrides(&["campaign.runs=5".into()]).unwrap());
        assert_eq!(CampaignConfig::from_entries(&entries).unwrap().runs, 5);
        let e = parse_overrides(&["campaign.runs=1".into(), "bad".into()]).unwrap_err();
        assert!(e.to_string().starts_with("--set:2:"));
    }
}
