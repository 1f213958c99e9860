use thiserror::Error;

use super::{run_trial, Outcome, TrialConfig, TrialError};
use crate::maze::Maze;
use crate::robot::NoiseModel;

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("target time must be positive, got {0}")]
    BadTarget(f64),
    #[error("controller does not solve the maze noiselessly: {0}")]
    ControllerFails(String),
    #[error("no speed reaches {target} s; fastest run takes {best} s")]
    Unreachable { target: f64, best: f64 },
    #[error(transparent)]
    Trial(#[from] TrialError),
}

const REL_TOL: f64 = 0.005;

/// Noiseless linear speed whose run finishes within 0.5% of `target_time`.
pub fn calibrate_speed(maze: &Maze, target_time: f64) -> Result<f64, CalibrationError> {
    calibrate_speed_with(&TrialConfig::new(maze.clone()), target_time)
}

/// As [`calibrate_speed`], keeping the geometry and controller settings of
/// `base`. Noise is switched off and the timeout lifted.
pub fn calibrate_speed_with(base: &TrialConfig, target_time: f64) -> Result<f64, CalibrationError> {
    if !(target_time > 0.0 && target_time.is_finite()) {
        return Err(CalibrationError::BadTarget(target_time));
    }
    let elapsed_at = |speed: f64| -> Result<f64, CalibrationError> {
        let mut c = base.clone();
        c.noise = NoiseModel::default();
        c.spec.linear_speed = speed;
        c.timeout = 1e3 * target_time.max(1.0) + 1e4;
        let rec = run_trial(&c)?;
        match rec.outcome {
            Outcome::Success => Ok(rec.elapsed),
            other => Err(CalibrationError::ControllerFails(format!(
                "at {speed} cm/s: {}",
                other.result_text()
            ))),
        }
    };
    let close = |t: f64| (t - target_time).abs() <= REL_TOL * target_time;

    // Bracket: elapsed(lo) > target ≥ elapsed(hi).
    let mut lo = 1.0;
    let mut t_lo = elapsed_at(lo)?;
    while t_lo <= target_time {
        lo /= 2.0;
        if lo < 1e-3 {
            return Err(CalibrationError::Unreachable {
                target: target_time,
                best: t_lo,
            });
        }
        t_lo = elapsed_at(lo)?;
    }
    let mut hi = 2.0 * lo;
    let mut t_hi = elapsed_at(hi)?;
    while t_hi > target_time {
        lo = hi;
        hi *= 2.0;
        if hi > 1e4 {
            return Err(CalibrationError::Unreachable {
                target: target_time,
                best: t_hi,
            });
        }
        t_hi = elapsed_at(hi)?;
    }
    // Elapsed time moves in whole control periods, so bisect all the way
    // to the crossing rather than stopping at the first close midpoint.
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        let t = elapsed_at(mid)?;
        if t > target_time {
            lo = mid;
        } else {
            hi = mid;
            t_hi = t;
        }
    }
    if close(t_hi) {
        Ok(hi)
    } else {
        Err(CalibrationError::Unreachable {
            target: target_time,
            best: t_hi,
        })
    }
}
