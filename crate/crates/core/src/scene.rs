//! Test-input space, the fixed straight-road scene, and frame translation.
//!
//! The canonical frame has the car driving along +x from `car_origin`, the
//! road centred on the car's initial lateral position, and pedestrian
//! headings measured counterclockwise from +x in degrees. Backends may use a
//! different origin, heading convention and speed unit; [`translate`] moves
//! test inputs between them.

use core::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Rect, Vec2};
use crate::{Error, Result};

/// Number of genes in a [`TestInput`].
pub const GENE_COUNT: usize = 5;

/// Gene names in vector order.
pub const GENE_NAMES: [&str; GENE_COUNT] = ["v0c", "x0p", "y0p", "theta_p", "v0p"];

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Range { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo).min(self.hi)
    }

    pub fn shifted(&self, by: f64) -> Range {
        Range::new(self.lo + by, self.hi + by)
    }
}

/// One test input: car speed, pedestrian start position, heading and speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestInput {
    /// Car speed.
    pub v0c: f64,
    /// Pedestrian initial x.
    pub x0p: f64,
    /// Pedestrian initial y.
    pub y0p: f64,
    /// Pedestrian heading in degrees.
    pub theta_p: f64,
    /// Pedestrian speed.
    pub v0p: f64,
}

impl TestInput {
    pub const fn new(v0c: f64, x0p: f64, y0p: f64, theta_p: f64, v0p: f64) -> Self {
        TestInput {
            v0c,
            x0p,
            y0p,
            theta_p,
            v0p,
        }
    }

    pub fn to_array(&self) -> [f64; GENE_COUNT] {
        [self.v0c, self.x0p, self.y0p, self.theta_p, self.v0p]
    }

    pub fn from_array(g: [f64; GENE_COUNT]) -> Self {
        TestInput::new(g[0], g[1], g[2], g[3], g[4])
    }

    pub fn gene(&self, index: usize) -> f64 {
        self.to_array()[index]
    }
}

/// Per-gene ranges of the search space, in absolute canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputSpace {
    pub v0c: Range,
    pub x0p: Range,
    pub y0p: Range,
    pub theta_p: Range,
    pub v0p: Range,
}

impl InputSpace {
    /// Builds a space whose position ranges are given relative to the car's
    /// initial position.
    pub fn relative_to(car_origin: Vec2, v0c: Range, dx: Range, dy: Range, theta_p: Range, v0p: Range) -> Self {
        InputSpace {
            v0c,
            x0p: dx.shifted(car_origin.x),
            y0p: dy.shifted(car_origin.y),
            theta_p,
            v0p,
        }
    }

    /// The standard ranges around the given car origin.
    pub fn default_for(car_origin: Vec2) -> Self {
        InputSpace::relative_to(
            car_origin,
            Range::new(1.0, 25.0),
            Range::new(20.0, 85.0),
            Range::new(-15.0, -2.0),
            Range::new(40.0, 160.0),
            Range::new(1.0, 5.0),
        )
    }

    pub fn ranges(&self) -> [Range; GENE_COUNT] {
        [self.v0c, self.x0p, self.y0p, self.theta_p, self.v0p]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in GENE_NAMES.iter().zip(self.ranges()) {
            if !(r.lo.is_finite() && r.hi.is_finite()) || r.lo > r.hi {
                return Err(Error::config(alloc::format!(
                    "range for {name} must be finite with lower <= upper, got [{}, {}]",
                    r.lo,
                    r.hi
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, input: &TestInput) -> bool {
        self.ranges().iter().zip(input.to_array()).all(|(r, v)| r.contains(v))
    }
}

impl Default for InputSpace {
    fn default() -> Self {
        InputSpace::default_for(Vec2::ZERO)
    }
}

/// Draws every gene independently and uniformly from its range.
pub fn sample_uniform<R: Rng + ?Sized>(space: &InputSpace, rng: &mut R) -> TestInput {
    let mut genes = [0.0; GENE_COUNT];
    for (g, r) in genes.iter_mut().zip(space.ranges()) {
        *g = if r.lo == r.hi {
            r.lo
        } else {
            rng.random_range(r.lo..=r.hi)
        };
    }
    TestInput::from_array(genes)
}

/// Projects every gene onto its range.
pub fn clamp(input: &TestInput, space: &InputSpace) -> TestInput {
    let mut genes = input.to_array();
    for (g, r) in genes.iter_mut().zip(space.ranges()) {
        *g = r.clamp(*g);
    }
    TestInput::from_array(genes)
}

/// The static scene shared by all scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    /// Car initial position `(x0c, y0c)` in the canonical frame.
    pub car_origin: Vec2,
    /// Length of the road segment under analysis.
    pub road_length: f64,
    /// Road width; the road spans `y0c +/- lane_width / 2`.
    pub lane_width: f64,
    pub car_length: f64,
    pub car_width: f64,
    /// Longitudinal offset of the footprint centre ahead of the car's
    /// reference point. With the default `car_length / 2` the reference
    /// point is the rear bumper.
    pub car_center_offset: f64,
    pub pedestrian_radius: f64,
    /// Hard stop for degenerate inputs (e.g. a stationary car).
    pub horizon: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            car_origin: Vec2::ZERO,
            road_length: 100.0,
            lane_width: 3.5,
            car_length: 4.0,
            car_width: 1.8,
            car_center_offset: 2.0,
            pedestrian_radius: 0.3,
            horizon: 150.0,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("road_length", self.road_length),
            ("lane_width", self.lane_width),
            ("car_length", self.car_length),
            ("car_width", self.car_width),
            ("horizon", self.horizon),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(alloc::format!("scene.{name} must be > 0, got {v}")));
            }
        }
        if !(self.pedestrian_radius >= 0.0) {
            return Err(Error::config("scene.pedestrian_radius must be >= 0"));
        }
        Ok(())
    }

    /// Car footprint for a car whose reference point is at `pos`.
    pub fn footprint(&self, pos: Vec2) -> Rect {
        let cx = pos.x + self.car_center_offset;
        Rect::new(
            Vec2::new(cx - self.car_length / 2.0, pos.y - self.car_width / 2.0),
            Vec2::new(cx + self.car_length / 2.0, pos.y + self.car_width / 2.0),
        )
    }

    /// Front bumper centre; sensors and the warning area are anchored here.
    pub fn front(&self, pos: Vec2) -> Vec2 {
        Vec2::new(pos.x + self.car_center_offset + self.car_length / 2.0, pos.y)
    }

    /// Rear bumper centre.
    pub fn rear(&self, pos: Vec2) -> Vec2 {
        Vec2::new(pos.x + self.car_center_offset - self.car_length / 2.0, pos.y)
    }

    /// Radius of the disc around the front point used for TTC.
    pub fn ttc_radius(&self) -> f64 {
        self.pedestrian_radius + self.car_width / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedUnit {
    MetersPerSecond,
    KilometersPerHour,
}

impl SpeedUnit {
    /// Metres per second in one unit.
    pub fn in_mps(self) -> f64 {
        match self {
            SpeedUnit::MetersPerSecond => 1.0,
            SpeedUnit::KilometersPerHour => 1.0 / 3.6,
        }
    }

    fn factor_to(self, to: SpeedUnit) -> f64 {
        match (self, to) {
            (a, b) if a == b => 1.0,
            (SpeedUnit::MetersPerSecond, SpeedUnit::KilometersPerHour) => 3.6,
            _ => 1.0 / 3.6,
        }
    }
}

impl fmt::Display for SpeedUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpeedUnit::MetersPerSecond => "m/s",
            SpeedUnit::KilometersPerHour => "km/h",
        })
    }
}

/// Coordinate conventions of one backend.
///
/// A point at canonical position `p` has position `p + origin` in this
/// frame. Headings are measured from `heading_zero_deg` (itself given
/// counterclockwise from canonical +x), clockwise when `clockwise` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub origin: Vec2,
    pub heading_zero_deg: f64,
    pub clockwise: bool,
    pub speed_unit: SpeedUnit,
}

impl FrameSpec {
    pub const CANONICAL: FrameSpec = FrameSpec {
        origin: Vec2::ZERO,
        heading_zero_deg: 0.0,
        clockwise: false,
        speed_unit: SpeedUnit::MetersPerSecond,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.origin.x.is_finite() && self.origin.y.is_finite() && self.heading_zero_deg.is_finite()) {
            return Err(Error::config("frame origin and heading reference must be finite"));
        }
        Ok(())
    }

    /// Heading in this frame to canonical degrees counterclockwise from +x.
    pub fn heading_to_canonical(&self, deg: f64) -> f64 {
        let ccw = if self.clockwise { -deg } else { deg };
        wrap_degrees(self.heading_zero_deg + ccw)
    }

    /// Canonical heading to this frame's convention.
    pub fn heading_from_canonical(&self, deg: f64) -> f64 {
        let rel = deg - self.heading_zero_deg;
        wrap_degrees(if self.clockwise { -rel } else { rel })
    }

    /// Canonical position to this frame.
    pub fn position_from_canonical(&self, p: Vec2) -> Vec2 {
        p + self.origin
    }

    pub fn position_to_canonical(&self, p: Vec2) -> Vec2 {
        p - self.origin
    }

    fn same_heading_convention(&self, other: &FrameSpec) -> bool {
        self.heading_zero_deg == other.heading_zero_deg && self.clockwise == other.clockwise
    }
}

impl Default for FrameSpec {
    fn default() -> Self {
        FrameSpec::CANONICAL
    }
}

fn wrap_degrees(deg: f64) -> f64 {
    let r = deg % 360.0;
    let w = if r < 0.0 { r + 360.0 } else { r };
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Re-expresses a test input given in frame `from` in frame `to`.
pub fn translate(input: &TestInput, from: &FrameSpec, to: &FrameSpec) -> TestInput {
    let shift = to.origin - from.origin;
    let theta_p = if from.same_heading_convention(to) {
        input.theta_p
    } else {
        to.heading_from_canonical(from.heading_to_canonical(input.theta_p))
    };
    let speed = from.speed_unit.factor_to(to.speed_unit);
    TestInput {
        v0c: input.v0c * speed,
        x0p: input.x0p + shift.x,
        y0p: input.y0p + shift.y,
        theta_p,
        v0p: input.v0p * speed,
    }
}
