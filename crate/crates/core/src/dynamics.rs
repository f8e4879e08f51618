//! Sensing and motion model of a two-sensor phototaxis robot.
//!
//! The light source sits at the world origin; each environment is realized
//! by choosing the robot's initial pose instead of moving the light. Sensor
//! intensity follows the inverse-square law, with the distance clamped below
//! by a small floor so the field stays finite at the source. The controller
//! is a pair of contralateral synapse weights: the turn rate is the weighted
//! sensor difference and the forward speed is the weighted sensor average.
//!
//! Two integrators are provided:
//! * [`integrate`] — fixed-step classical RK4, bitwise deterministic.
//! * [`integrate_saturated`] — explicit Euler with linear/angular speed
//!   caps, a cheap stand-in for motor limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// RK4 step size.
pub const DEFAULT_DT: f64 = 0.01;
/// RK4 step count (total time 1000 units at the default step size).
pub const DEFAULT_STEPS: usize = 100_000;
/// A run succeeds once the robot center comes within this distance of the light.
pub const DEFAULT_SUCCESS_RADIUS: f64 = 0.2;
/// Lower clamp on sensor-to-light distance; removes the inverse-square singularity.
pub const DEFAULT_DISTANCE_FLOOR: f64 = 1e-3;
/// Step size for the saturated-motor variant.
pub const SATURATED_DT: f64 = 0.05;
/// Step count for the saturated-motor variant (125 time units).
pub const SATURATED_STEPS: usize = 2_500;
/// Default linear speed cap for the saturated-motor variant.
pub const DEFAULT_V_MAX: f64 = 1.0;
/// Default angular speed cap for the saturated-motor variant.
pub const DEFAULT_OMEGA_MAX: f64 = std::f64::consts::PI;

/// A planar point or offset, in body units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

/// Body-frame positions of the two sensors; (0, 0) is the body center and
/// each coordinate lies in [-0.5, 0.5].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorLayout {
    pub l1: Vec2,
    pub l2: Vec2,
}

impl SensorLayout {
    pub const fn new(l1: Vec2, l2: Vec2) -> Self {
        SensorLayout { l1, l2 }
    }

    /// The symmetric, anterior-most placement: l1 = (0.5, 0.5), l2 = (0.5, -0.5).
    pub const fn canonical() -> Self {
        SensorLayout::new(Vec2::new(0.5, 0.5), Vec2::new(0.5, -0.5))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("l1.x", self.l1.x),
            ("l1.y", self.l1.y),
            ("l2.x", self.l2.x),
            ("l2.y", self.l2.y),
        ] {
            if !(-0.5..=0.5).contains(&c) || !c.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "sensor coordinate {name} = {c} outside [-0.5, 0.5]"
                )));
            }
        }
        Ok(())
    }
}

/// The two trainable synapse weights, each in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerWeights {
    pub w1: f64,
    pub w2: f64,
}

impl ControllerWeights {
    pub const fn new(w1: f64, w2: f64) -> Self {
        ControllerWeights { w1, w2 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("w1", self.w1), ("w2", self.w2)] {
            if !(-1.0..=1.0).contains(&w) || !w.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "weight {name} = {w} outside [-1, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Robot pose in world coordinates plus elapsed time. `alpha` is the heading
/// in radians, with 0 pointing along +x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub t: f64,
}

impl RobotState {
    pub const fn new(x: f64, y: f64, alpha: f64) -> Self {
        RobotState { x, y, alpha, t: 0.0 }
    }

    /// Distance from the robot center to the light source at the origin.
    pub fn center_distance(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.alpha.is_finite()
    }
}

/// Linear and angular speed caps for the saturated-motor variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Saturation {
    pub v_max: f64,
    pub omega_max: f64,
}

impl Default for Saturation {
    fn default() -> Self {
        Saturation {
            v_max: DEFAULT_V_MAX,
            omega_max: DEFAULT_OMEGA_MAX,
        }
    }
}

/// Integration parameters shared by both model variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub steps: usize,
    pub success_radius: f64,
    pub distance_floor: f64,
    pub early_stop: bool,
    /// Speed caps; required by [`integrate_saturated`], ignored by [`integrate`].
    pub saturation: Option<Saturation>,
}

impl SimConfig {
    /// Defaults for the RK4 model: dt = 0.01 over 100000 steps.
    pub fn theoretical() -> Self {
        SimConfig {
            dt: DEFAULT_DT,
            steps: DEFAULT_STEPS,
            success_radius: DEFAULT_SUCCESS_RADIUS,
            distance_floor: DEFAULT_DISTANCE_FLOOR,
            early_stop: true,
            saturation: None,
        }
    }

    /// Defaults for the saturated-motor variant: dt = 0.05 over 2500 steps.
    pub fn saturated() -> Self {
        SimConfig {
            dt: SATURATED_DT,
            steps: SATURATED_STEPS,
            success_radius: DEFAULT_SUCCESS_RADIUS,
            distance_floor: DEFAULT_DISTANCE_FLOOR,
            early_stop: true,
            saturation: Some(Saturation::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt = {} must be > 0", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be >= 1".into()));
        }
        if !(self.success_radius > 0.0 && self.success_radius.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "success_radius = {} must be > 0",
                self.success_radius
            )));
        }
        if !(self.distance_floor > 0.0 && self.distance_floor < self.success_radius) {
            return Err(Error::InvalidConfig(format!(
                "distance_floor = {} must lie in (0, success_radius)",
                self.distance_floor
            )));
        }
        if let Some(sat) = &self.saturation {
            if !(sat.v_max > 0.0) || !(sat.omega_max > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "saturation caps v_max = {}, omega_max = {} must be > 0",
                    sat.v_max, sat.omega_max
                )));
            }
        }
        Ok(())
    }
}

/// One recorded integration sample: pose plus the instantaneous sensor
/// values and forward speed at that state (speed clamped in the saturated
/// variant, since that is what drives the update).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub s1: f64,
    pub s2: f64,
    pub v: f64,
}

/// Result of a single simulation run.
///
/// `min_distance` is the minimum center-to-light distance over visited
/// states up to and including the first state within the success radius;
/// once a run has crossed the radius the value is frozen, so early stopping
/// on or off yields identical outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub success: bool,
    pub min_distance: f64,
    pub steps_taken: usize,
    pub final_state: RobotState,
    pub trajectory: Option<Vec<TrajectorySample>>,
}

/// Counterclockwise rotation matrix for heading `alpha`.
pub fn rotation_matrix(alpha: f64) -> [[f64; 2]; 2] {
    let (sin_a, cos_a) = alpha.sin_cos();
    [[cos_a, -sin_a], [sin_a, cos_a]]
}

/// World position of a sensor mounted at body offset `l`.
pub fn sensor_world_position(state: &RobotState, l: Vec2) -> Vec2 {
    let r = rotation_matrix(state.alpha);
    Vec2::new(
        state.x + r[0][0] * l.x + r[0][1] * l.y,
        state.y + r[1][0] * l.x + r[1][1] * l.y,
    )
}

/// Inverse-square light intensity at a point, with the distance to the
/// origin clamped below by `floor`.
#[inline]
fn intensity_at(x: f64, y: f64, floor: f64) -> f64 {
    let d = (x * x + y * y).sqrt().max(floor);
    1.0 / (d * d)
}

/// Light intensity captured by the sensor at body offset `l`.
pub fn sensor_value(state: &RobotState, l: Vec2, floor: f64) -> f64 {
    let p = sensor_world_position(state, l);
    intensity_at(p.x, p.y, floor)
}

#[inline]
fn sensor_pair(x: f64, y: f64, sin_a: f64, cos_a: f64, layout: &SensorLayout, floor: f64) -> (f64, f64) {
    let l1 = layout.l1;
    let l2 = layout.l2;
    let s1 = intensity_at(
        x + cos_a * l1.x - sin_a * l1.y,
        y + sin_a * l1.x + cos_a * l1.y,
        floor,
    );
    let s2 = intensity_at(
        x + cos_a * l2.x - sin_a * l2.y,
        y + sin_a * l2.x + cos_a * l2.y,
        floor,
    );
    (s1, s2)
}

#[inline]
fn deriv_raw(
    x: f64,
    y: f64,
    alpha: f64,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    floor: f64,
) -> (f64, f64, f64) {
    let (sin_a, cos_a) = alpha.sin_cos();
    let (s1, s2) = sensor_pair(x, y, sin_a, cos_a, layout, floor);
    let omega = weights.w1 * s1 - weights.w2 * s2;
    let v = (weights.w1 * s1 + weights.w2 * s2) / 2.0;
    (v * cos_a, v * sin_a, omega)
}

/// Time derivatives (dx/dt, dy/dt, dalpha/dt) of the robot pose.
///
/// The turn rate is `w1*s1 - w2*s2` and the forward speed is the weighted
/// sensor average `(w1*s1 + w2*s2) / 2`.
pub fn derivatives(
    state: &RobotState,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    floor: f64,
) -> (f64, f64, f64) {
    deriv_raw(state.x, state.y, state.alpha, layout, weights, floor)
}

fn sample_at(
    state: &RobotState,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    floor: f64,
    saturation: Option<&Saturation>,
) -> TrajectorySample {
    let (sin_a, cos_a) = state.alpha.sin_cos();
    let (s1, s2) = sensor_pair(state.x, state.y, sin_a, cos_a, layout, floor);
    let mut v = (weights.w1 * s1 + weights.w2 * s2) / 2.0;
    if let Some(sat) = saturation {
        v = v.clamp(-sat.v_max, sat.v_max);
    }
    TrajectorySample {
        t: state.t,
        x: state.x,
        y: state.y,
        alpha: state.alpha,
        s1,
        s2,
        v,
    }
}

#[inline]
fn rk4_step(
    state: &RobotState,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    dt: f64,
    floor: f64,
) -> RobotState {
    let h2 = dt * 0.5;
    let (k1x, k1y, k1a) = deriv_raw(state.x, state.y, state.alpha, layout, weights, floor);
    let (k2x, k2y, k2a) = deriv_raw(
        state.x + h2 * k1x,
        state.y + h2 * k1y,
        state.alpha + h2 * k1a,
        layout,
        weights,
        floor,
    );
    let (k3x, k3y, k3a) = deriv_raw(
        state.x + h2 * k2x,
        state.y + h2 * k2y,
        state.alpha + h2 * k2a,
        layout,
        weights,
        floor,
    );
    let (k4x, k4y, k4a) = deriv_raw(
        state.x + dt * k3x,
        state.y + dt * k3y,
        state.alpha + dt * k3a,
        layout,
        weights,
        floor,
    );
    let w = dt / 6.0;
    RobotState {
        x: state.x + w * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y: state.y + w * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        alpha: state.alpha + w * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
        t: state.t + dt,
    }
}

struct RunTracker {
    min_distance: f64,
    crossed: bool,
    success_radius: f64,
}

impl RunTracker {
    fn new(initial: &RobotState, success_radius: f64) -> Self {
        let d0 = initial.center_distance();
        RunTracker {
            min_distance: d0,
            crossed: d0 <= success_radius,
            success_radius,
        }
    }

    /// Returns true the first time the success radius is crossed. The
    /// running minimum freezes at that crossing.
    fn observe(&mut self, state: &RobotState) -> bool {
        if self.crossed {
            return false;
        }
        let d = state.center_distance();
        if d < self.min_distance {
            self.min_distance = d;
        }
        if self.min_distance <= self.success_radius {
            self.crossed = true;
            return true;
        }
        false
    }
}

/// Integrate the pose with fixed-step classical RK4.
///
/// The center-to-light distance is checked at step endpoints; with
/// `cfg.early_stop` the run halts at the first state within the success
/// radius. Any speed caps in `cfg.saturation` are ignored here.
pub fn integrate(
    initial: &RobotState,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    cfg: &SimConfig,
    record_trajectory: bool,
) -> Result<SimOutcome> {
    run(initial, layout, weights, cfg, record_trajectory, false)
}

/// Integrate the pose with explicit Euler, clamping the forward speed to
/// `[-v_max, v_max]` and the turn rate to `[-omega_max, omega_max]` before
/// each update. Requires `cfg.saturation`.
pub fn integrate_saturated(
    initial: &RobotState,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    cfg: &SimConfig,
    record_trajectory: bool,
) -> Result<SimOutcome> {
    if cfg.saturation.is_none() {
        return Err(Error::InvalidConfig(
            "integrate_saturated requires cfg.saturation".into(),
        ));
    }
    run(initial, layout, weights, cfg, record_trajectory, true)
}

fn run(
    initial: &RobotState,
    layout: &SensorLayout,
    weights: &ControllerWeights,
    cfg: &SimConfig,
    record_trajectory: bool,
    saturated: bool,
) -> Result<SimOutcome> {
    cfg.validate()?;
    let floor = cfg.distance_floor;
    let sat = if saturated { cfg.saturation.as_ref() } else { None };

    let mut state = *initial;
    let mut tracker = RunTracker::new(&state, cfg.success_radius);
    let mut trajectory = record_trajectory.then(|| {
        let mut samples = Vec::with_capacity(cfg.steps.min(1 << 20) + 1);
        samples.push(sample_at(&state, layout, weights, floor, sat));
        samples
    });
    let mut steps_taken = 0;

    if !(tracker.crossed && cfg.early_stop) {
        for step in 1..=cfg.steps {
            state = if saturated {
                let sat = sat.expect("checked above");
                let (sin_a, cos_a) = state.alpha.sin_cos();
                let (s1, s2) = sensor_pair(state.x, state.y, sin_a, cos_a, layout, floor);
                let v = ((weights.w1 * s1 + weights.w2 * s2) / 2.0).clamp(-sat.v_max, sat.v_max);
                let omega = (weights.w1 * s1 - weights.w2 * s2).clamp(-sat.omega_max, sat.omega_max);
                RobotState {
                    x: state.x + cfg.dt * (v * cos_a),
                    y: state.y + cfg.dt * (v * sin_a),
                    alpha: state.alpha + cfg.dt * omega,
                    t: state.t + cfg.dt,
                }
            } else {
                rk4_step(&state, layout, weights, cfg.dt, floor)
            };
            if !state.is_finite() {
                return Err(Error::NumericalDivergence {
                    step,
                    context: String::new(),
                });
            }
            steps_taken = step;
            if let Some(samples) = trajectory.as_mut() {
                samples.push(sample_at(&state, layout, weights, floor, sat));
            }
            let crossed_now = tracker.observe(&state);
            if crossed_now && cfg.early_stop {
                break;
            }
        }
    }

    Ok(SimOutcome {
        success: tracker.crossed,
        min_distance: tracker.min_distance,
        steps_taken,
        final_state: state,
        trajectory,
    })
}
