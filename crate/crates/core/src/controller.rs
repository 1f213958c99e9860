//! Reactive hill-climbing controller: drive until the front gap closes,
//! back off, pivot toward the side with more room.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::robot::{normalize_angle, wrap_pi, ConfigError, Pose, RobotSpec, SensorReading};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Turn {
    Left,
    Right,
}

impl Turn {
    /// +1 for counterclockwise.
    pub fn sign(self) -> f64 {
        match self {
            Turn::Left => 1.0,
            Turn::Right => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Turn::Left => "left",
            Turn::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    PreferLeft,
    #[default]
    PreferRight,
}

impl TieBreak {
    pub fn side(self) -> Turn {
        match self {
            TieBreak::PreferLeft => Turn::Left,
            TieBreak::PreferRight => Turn::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    /// cm, measured from the front sensor.
    pub front_stop: f64,
    /// cm
    pub reverse_distance: f64,
    /// rad
    pub turn_angle: f64,
    pub tie_break: TieBreak,
    /// cm
    pub decision_margin: f64,
    /// rad; a turn is complete once the heading is this close to target.
    pub angular_tolerance: f64,
}

impl Default for ControllerParams {
    fn default() -> Self {
        ControllerParams {
            front_stop: 10.0,
            reverse_distance: 5.0,
            turn_angle: FRAC_PI_2,
            tie_break: TieBreak::PreferRight,
            decision_margin: 0.0,
            angular_tolerance: 0.5f64.to_radians(),
        }
    }
}

impl ControllerParams {
    pub fn check(&self) -> Result<(), ConfigError> {
        if !(self.front_stop.is_finite() && self.front_stop > 0.0) {
            return Err(ConfigError::new("front_stop", format!("{} must be positive", self.front_stop)));
        }
        if !(self.reverse_distance.is_finite() && self.reverse_distance >= 0.0) {
            return Err(ConfigError::new(
                "reverse_distance",
                format!("{} must be non-negative", self.reverse_distance),
            ));
        }
        if !(self.turn_angle > 0.0 && self.turn_angle <= PI) {
            return Err(ConfigError::new("turn_angle", "must lie in (0, π]"));
        }
        if !(self.decision_margin.is_finite() && self.decision_margin >= 0.0) {
            return Err(ConfigError::new("decision_margin", "must be non-negative"));
        }
        if !(self.angular_tolerance > 0.0 && self.angular_tolerance < self.turn_angle) {
            return Err(ConfigError::new("angular_tolerance", "must lie in (0, turn_angle)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Phase {
    DriveForward,
    Reversing { remaining: f64 },
    Deciding,
    Turning { target: f64, turn: Turn },
    Exited,
    Stuck,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::DriveForward => "DriveForward",
            Phase::Reversing { .. } => "Reversing",
            Phase::Deciding => "Deciding",
            Phase::Turning { .. } => "Turning",
            Phase::Exited => "Exited",
            Phase::Stuck => "Stuck",
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Phase::Exited | Phase::Stuck)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerState {
    pub phase: Phase,
    pub turn_count: usize,
    /// cm, forward and reverse travel.
    pub odometer: f64,
}

impl Default for ControllerState {
    fn default() -> Self {
        ControllerState {
            phase: Phase::DriveForward,
            turn_count: 0,
            odometer: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Actuation {
    /// cm/s, negative reverses.
    pub v: f64,
    /// rad/s
    pub omega: f64,
}

impl Actuation {
    pub const STOP: Actuation = Actuation { v: 0.0, omega: 0.0 };
}

pub fn decide_turn(reading: &SensorReading, params: &ControllerParams) -> Turn {
    if reading.left > reading.right + params.decision_margin {
        Turn::Left
    } else if reading.right > reading.left + params.decision_margin {
        Turn::Right
    } else {
        params.tie_break.side()
    }
}

/// One control tick. Phase changes happen on a tick of their own that
/// commands a full stop.
///
/// While driving, the commanded speed is capped so that the front gap does
/// not close past `front_stop` within one period; reversing and turning are
/// capped the same way against what remains.
pub fn controller_step(
    state: &ControllerState,
    reading: &SensorReading,
    pose: &Pose,
    params: &ControllerParams,
    spec: &RobotSpec,
) -> (ControllerState, Actuation) {
    let dt = spec.control_period;
    let mut next = *state;
    let act = match state.phase {
        Phase::DriveForward => {
            let gap = reading.front - params.front_stop;
            if gap <= 1e-9 {
                next.phase = Phase::Reversing {
                    remaining: params.reverse_distance,
                };
                Actuation::STOP
            } else {
                Actuation {
                    v: spec.linear_speed.min(gap / dt),
                    omega: 0.0,
                }
            }
        }
        Phase::Reversing { remaining } => {
            if remaining <= 1e-9 {
                next.phase = Phase::Deciding;
                Actuation::STOP
            } else {
                let v = spec.linear_speed.min(remaining / dt);
                next.phase = Phase::Reversing {
                    remaining: remaining - v * dt,
                };
                Actuation { v: -v, omega: 0.0 }
            }
        }
        Phase::Deciding => {
            // The previous reverse can leave the robot up to reverse_distance
            // off the corridor center, pushing one wall that much further.
            let blocked = params.front_stop + params.reverse_distance;
            if reading.left <= blocked && reading.right <= blocked {
                next.phase = Phase::Stuck;
            } else {
                let turn = decide_turn(reading, params);
                next.turn_count += 1;
                next.phase = Phase::Turning {
                    target: normalize_angle(pose.theta + turn.sign() * params.turn_angle),
                    turn,
                };
            }
            Actuation::STOP
        }
        Phase::Turning { target, .. } => {
            let err = wrap_pi(target - pose.theta);
            if err.abs() <= params.angular_tolerance {
                next.phase = Phase::DriveForward;
                Actuation::STOP
            } else {
                Actuation {
                    v: 0.0,
                    omega: (err / dt).clamp(-spec.angular_speed, spec.angular_speed),
                }
            }
        }
        Phase::Exited | Phase::Stuck => Actuation::STOP,
    };
    next.odometer += act.v.abs() * dt;
    (next, act)
}

/// Nearest multiple of π/2 in `[0, 2π)`.
pub fn heading_snap(theta: f64) -> f64 {
    let q = (normalize_angle(theta) / FRAC_PI_2).round();
    normalize_angle((q * FRAC_PI_2) % TAU)
}
