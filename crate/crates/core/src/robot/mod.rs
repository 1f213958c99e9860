//! Continuous robot model: pose, body and sensor geometry, noise.

mod kinematics;
mod sensing;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use kinematics::{beyond_exit, check_collision, step_kinematics};
pub use sensing::{ray_cast, sense, RayError, SensorSample};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid {field}: {reason}")]
pub struct ConfigError {
    pub field: &'static str,
    pub reason: String,
}

impl ConfigError {
    pub(crate) fn new(field: &'static str, reason: impl Into<String>) -> Self {
        ConfigError {
            field,
            reason: reason.into(),
        }
    }
}

/// Wrap an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_pi(theta: f64) -> f64 {
    let t = normalize_angle(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, 0 = east, counterclockwise.
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    /// World coordinates of a point given in the body frame
    /// (`forward` along the heading, `left` to its left).
    pub fn body_to_world(&self, forward: f64, left: f64) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.x + forward * c - left * s, self.y + forward * s + left * c)
    }
}

/// Sensor channel order used everywhere: front, left, right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    Front,
    Left,
    Right,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Front, Channel::Left, Channel::Right];

    pub fn name(self) -> &'static str {
        match self {
            Channel::Front => "front",
            Channel::Left => "left",
            Channel::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorMount {
    /// Mount point in the body frame, cm ahead of the center.
    pub forward: f64,
    /// Mount point in the body frame, cm to the left of the center.
    pub left: f64,
    /// Ray direction relative to the heading.
    pub angle: f64,
}

/// Front mount sits 5 cm ahead of the center, inside the body, so a 10 cm
/// stop in front of a wall leaves the center in the middle of a 30 cm cell.
pub const DEFAULT_FRONT_MOUNT: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub body_radius: f64,
    /// Front, left, right.
    pub sensors: [SensorMount; 3],
    pub max_range: f64,
    /// cm/s
    pub linear_speed: f64,
    /// rad/s
    pub angular_speed: f64,
    /// s
    pub control_period: f64,
}

impl Default for RobotSpec {
    fn default() -> Self {
        let r = 9.0;
        RobotSpec {
            body_radius: r,
            sensors: [
                SensorMount {
                    forward: DEFAULT_FRONT_MOUNT,
                    left: 0.0,
                    angle: 0.0,
                },
                SensorMount {
                    forward: 0.0,
                    left: r,
                    angle: FRAC_PI_2,
                },
                SensorMount {
                    forward: 0.0,
                    left: -r,
                    angle: -FRAC_PI_2,
                },
            ],
            max_range: 250.0,
            linear_speed: 10.0,
            angular_speed: FRAC_PI_2,
            control_period: 0.05,
        }
    }
}

impl RobotSpec {
    pub fn with_speed(mut self, linear_speed: f64) -> Self {
        self.linear_speed = linear_speed;
        self
    }

    pub fn mount(&self, channel: Channel) -> SensorMount {
        self.sensors[channel as usize]
    }

    pub fn check(&self, cell_size: f64) -> Result<(), ConfigError> {
        let positive = |field, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::new(field, format!("{v} must be positive")))
            }
        };
        positive("body_radius", self.body_radius)?;
        positive("max_range", self.max_range)?;
        positive("linear_speed", self.linear_speed)?;
        positive("angular_speed", self.angular_speed)?;
        positive("control_period", self.control_period)?;
        if self.max_range <= self.body_radius {
            return Err(ConfigError::new("max_range", "must exceed body_radius"));
        }
        if 2.0 * self.body_radius >= cell_size {
            return Err(ConfigError::new(
                "body_radius",
                format!("robot of radius {} does not fit a {cell_size} cm corridor", self.body_radius),
            ));
        }
        for m in &self.sensors {
            if m.forward.hypot(m.left) > self.body_radius + 1e-9 {
                return Err(ConfigError::new("sensors", "mount point outside the body"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    /// cm
    pub gaussian_sigma: f64,
    /// Per channel and reading.
    pub misread_prob: f64,
    /// rad, drawn once per commanded turn.
    pub turn_error_sigma: f64,
}

impl NoiseModel {
    pub fn is_zero(&self) -> bool {
        self.gaussian_sigma == 0.0 && self.misread_prob == 0.0 && self.turn_error_sigma == 0.0
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let nonneg = |field, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ConfigError::new(field, format!("{v} must be non-negative")))
            }
        };
        nonneg("gaussian_sigma", self.gaussian_sigma)?;
        nonneg("misread_prob", self.misread_prob)?;
        nonneg("turn_error_sigma", self.turn_error_sigma)?;
        if self.misread_prob > 1.0 {
            return Err(ConfigError::new("misread_prob", "must not exceed 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorReading {
    pub front: f64,
    pub left: f64,
    pub right: f64,
}

impl SensorReading {
    pub fn get(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Front => self.front,
            Channel::Left => self.left,
            Channel::Right => self.right,
        }
    }

    pub fn set(&mut self, channel: Channel, value: f64) {
        match channel {
            Channel::Front => self.front = value,
            Channel::Left => self.left = value,
            Channel::Right => self.right = value,
        }
    }
}
