//! Closed-loop trials: sense, decide, move, check, repeat.

mod batch;
mod calibrate;
mod trace;

use std::fmt;
use std::mem::discriminant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::controller::{controller_step, heading_snap, ControllerParams, ControllerState, Phase};
use crate::maze::Maze;
use crate::robot::{
    beyond_exit, check_collision, normalize_angle, sense, step_kinematics, wrap_pi, Channel, ConfigError,
    NoiseModel, Pose, RayError, RobotSpec,
};

pub use batch::{run_batch, run_batch_records, seed_for_trial, splitmix64, BatchReport, BatchRow};
pub use calibrate::{calibrate_speed, calibrate_speed_with, CalibrationError};
pub use trace::{read_trace_csv, write_trace_csv, TraceError, TraceEvent, TraceRow, TRACE_HEADER};

pub const DEFAULT_TIMEOUT: f64 = 300.0;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub maze: Maze,
    pub spec: RobotSpec,
    pub params: ControllerParams,
    pub noise: NoiseModel,
    pub seed: u64,
    /// s
    pub timeout: f64,
}

impl TrialConfig {
    pub fn new(maze: Maze) -> Self {
        TrialConfig {
            maze,
            spec: RobotSpec::default(),
            params: ControllerParams::default(),
            noise: NoiseModel::default(),
            seed: 0,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn check(&self) -> Result<(), TrialError> {
        self.spec.check(self.maze.cell_size())?;
        self.params.check()?;
        self.noise.check()?;
        if !(self.timeout > 0.0) {
            return Err(ConfigError::new("timeout", format!("{} must be positive", self.timeout)).into());
        }
        if !self.maze.exit_reachable() {
            return Err(TrialError::Unsolvable);
        }
        Ok(())
    }

    /// Pose at the start cell center facing the start heading.
    pub fn start_pose(&self) -> Pose {
        let (x, y) = self.maze.cell_center(self.maze.start());
        Pose::new(x, y, self.maze.start_heading().angle())
    }
}

#[derive(Debug, Error)]
pub enum TrialError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("maze exit is not reachable from the start")]
    Unsolvable,
    #[error("sensor: {0}")]
    Sensor(#[from] RayError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FailureMode {
    SensorMisread,
    IncompleteTurn,
    Collision,
    Stuck,
    Timeout,
}

impl FailureMode {
    pub const ALL: [FailureMode; 5] = [
        FailureMode::SensorMisread,
        FailureMode::IncompleteTurn,
        FailureMode::Collision,
        FailureMode::Stuck,
        FailureMode::Timeout,
    ];

    /// Human-readable reason, as in a results table.
    pub fn reason(self) -> &'static str {
        match self {
            FailureMode::SensorMisread => "Sensor misread",
            FailureMode::IncompleteTurn => "Incomplete turn",
            FailureMode::Collision => "Collision",
            FailureMode::Stuck => "Stuck",
            FailureMode::Timeout => "Timeout",
        }
    }
}

impl fmt::Display for FailureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What physically ended the trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    Exited,
    Collision,
    Stuck,
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Outcome {
    Success,
    Failure {
        mode: FailureMode,
        /// Turns started before the failure.
        at_turn_index: usize,
        /// s
        at_time: f64,
    },
}

fn ordinal(n: usize) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }

    pub fn mode(&self) -> Option<FailureMode> {
        match self {
            Outcome::Success => None,
            Outcome::Failure { mode, .. } => Some(*mode),
        }
    }

    /// "Successfully left maze" or "Failed at 2nd turn".
    pub fn result_text(&self) -> String {
        match self {
            Outcome::Success => "Successfully left maze".to_string(),
            Outcome::Failure { at_turn_index: 0, .. } => "Failed before 1st turn".to_string(),
            Outcome::Failure { at_turn_index, .. } => format!("Failed at {} turn", ordinal(*at_turn_index)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimedEvent {
    pub tick: usize,
    pub event: TraceEvent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub outcome: Outcome,
    pub termination: Termination,
    /// s
    pub elapsed: f64,
    /// cm, odometer including reverse travel.
    pub distance: f64,
    pub turn_count: usize,
    pub final_pose: Pose,
    /// Copied from the controller so the record classifies on its own.
    pub angular_tolerance: f64,
    pub events: Vec<TimedEvent>,
    pub trace: Vec<TraceRow>,
}

impl TrialRecord {
    pub fn trace_csv(&self) -> String {
        write_trace_csv(&self.trace)
    }

    /// Cells whose interior the center entered, in order, without repeats
    /// of the current cell.
    pub fn visited_cells(&self, maze: &Maze) -> Vec<crate::maze::CellIndex> {
        let mut out: Vec<crate::maze::CellIndex> = Vec::new();
        let points = self
            .trace
            .iter()
            .map(|r| (r.x, r.y))
            .chain(std::iter::once((self.final_pose.x, self.final_pose.y)));
        for (x, y) in points {
            if let Some(c) = maze.cell_at(x, y) {
                if out.last() != Some(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// `outcome=... turns=... time=... distance=... reason=...`
    pub fn summary_line(&self) -> String {
        let (outcome, reason) = match self.outcome {
            Outcome::Success => ("success", "-".to_string()),
            Outcome::Failure { mode, .. } => ("failure", mode.to_string()),
        };
        format!(
            "outcome={outcome} turns={} time={:.2} distance={:.2} reason={reason}",
            self.turn_count, self.elapsed, self.distance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("classify_failure called on a successful trial")]
pub struct NotAFailure;

/// Assign a failure to one mode, first match wins:
/// 1. a misread changed a controller decision, or a front misread landed
///    within two control periods of the end;
/// 2. the last finished turn missed its heading by more than the tolerance;
/// 3. whatever physically ended the trial.
pub fn classify_failure(record: &TrialRecord) -> Result<FailureMode, NotAFailure> {
    let cause = match record.termination {
        Termination::Exited => return Err(NotAFailure),
        Termination::Collision => FailureMode::Collision,
        Termination::Stuck => FailureMode::Stuck,
        Termination::Timeout => FailureMode::Timeout,
    };
    let last_tick = record.trace.len().saturating_sub(1);
    let misread = record.events.iter().any(|e| match &e.event {
        TraceEvent::MisreadAltered => true,
        TraceEvent::Misread(which) => which[Channel::Front as usize] && e.tick + 2 >= last_tick,
        _ => false,
    });
    if misread {
        return Ok(FailureMode::SensorMisread);
    }
    let last_turn = record.events.iter().rev().find_map(|e| match e.event {
        TraceEvent::TurnDone { error, .. } => Some(error),
        _ => None,
    });
    if last_turn.is_some_and(|err| err > record.angular_tolerance) {
        return Ok(FailureMode::IncompleteTurn);
    }
    Ok(cause)
}

/// Streams for sensing and for turn error, independent of each other.
fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ id.wrapping_mul(0xA076_1D64_78BD_642F)))
}

fn same_decision(a: &Phase, b: &Phase) -> bool {
    match (a, b) {
        (Phase::Turning { turn: x, .. }, Phase::Turning { turn: y, .. }) => x == y,
        _ => discriminant(a) == discriminant(b),
    }
}

pub fn run_trial(config: &TrialConfig) -> Result<TrialRecord, TrialError> {
    config.check()?;
    let maze = &config.maze;
    let spec = &config.spec;
    let params = &config.params;
    let noise = &config.noise;
    let dt = spec.control_period;
    let max_ticks = (config.timeout / dt + 1e-9).floor() as usize;
    let snap = noise.is_zero();

    let mut sense_rng = stream(config.seed, 1);
    let mut turn_rng = stream(config.seed, 2);

    let mut pose = config.start_pose();
    let mut state = ControllerState::default();
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut events: Vec<TimedEvent> = Vec::new();
    // Heading the current turn should reach, before any shortfall.
    let mut intended = pose.theta;
    let mut tick = 0usize;

    let termination = loop {
        if tick >= max_ticks {
            break Termination::Timeout;
        }
        let mut tick_events = Vec::new();
        let sample = sense(maze, &pose, spec, noise, &mut sense_rng)?;
        let (mut next, act) = controller_step(&state, &sample.reading, &pose, params, spec);
        if sample.any_misread() {
            tick_events.push(TraceEvent::Misread(sample.misread));
            let (honest, _) = controller_step(&state, &sample.unreplaced, &pose, params, spec);
            if !same_decision(&honest.phase, &next.phase) {
                tick_events.push(TraceEvent::MisreadAltered);
            }
        }

        match (state.phase, &mut next.phase) {
            (Phase::Deciding, Phase::Turning { target, turn }) => {
                intended = *target;
                let shortfall = if noise.turn_error_sigma > 0.0 {
                    let z: f64 = turn_rng.sample(StandardNormal);
                    (noise.turn_error_sigma * z).abs()
                } else {
                    0.0
                };
                *target = normalize_angle(*target - turn.sign() * shortfall);
                tick_events.push(TraceEvent::TurnStart {
                    index: next.turn_count,
                    turn: *turn,
                    shortfall,
                });
            }
            (Phase::Turning { .. }, Phase::DriveForward) => {
                if snap {
                    pose.theta = heading_snap(pose.theta);
                }
                tick_events.push(TraceEvent::TurnDone {
                    index: next.turn_count,
                    error: wrap_pi(pose.theta - intended).abs(),
                });
            }
            _ => {}
        }

        let row_pose = pose;
        let moved = step_kinematics(pose, act.v, act.omega, dt);
        let ended = if beyond_exit(maze, (moved.x, moved.y)) {
            next.phase = Phase::Exited;
            tick_events.push(TraceEvent::Exit);
            Some(Termination::Exited)
        } else if check_collision(maze, &moved, spec) {
            tick_events.push(TraceEvent::Collision);
            Some(Termination::Collision)
        } else if next.phase == Phase::Stuck {
            tick_events.push(TraceEvent::Stuck);
            Some(Termination::Stuck)
        } else {
            None
        };

        let event_text = (!tick_events.is_empty()).then(|| {
            tick_events
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(";")
        });
        trace.push(TraceRow {
            t: tick as f64 * dt,
            x: row_pose.x,
            y: row_pose.y,
            theta: row_pose.theta,
            front: sample.reading.front,
            left: sample.reading.left,
            right: sample.reading.right,
            phase: next.phase.name().to_string(),
            event: event_text,
        });
        events.extend(tick_events.into_iter().map(|event| TimedEvent { tick, event }));

        pose = moved;
        state = next;
        tick += 1;
        if let Some(t) = ended {
            break t;
        }
    };

    if termination == Termination::Timeout {
        if let Some(last) = trace.last_mut() {
            last.event = Some(match last.event.take() {
                Some(e) => format!("{e};timeout"),
                None => "timeout".to_string(),
            });
        }
        events.push(TimedEvent {
            tick: tick.saturating_sub(1),
            event: TraceEvent::Timeout,
        });
    }

    let elapsed = tick as f64 * dt;
    let mut record = TrialRecord {
        seed: config.seed,
        outcome: Outcome::Success,
        termination,
        elapsed,
        distance: state.odometer,
        turn_count: state.turn_count,
        final_pose: pose,
        angular_tolerance: params.angular_tolerance,
        events,
        trace,
    };
    if let Ok(mode) = classify_failure(&record) {
        record.outcome = Outcome::Failure {
            mode,
            at_turn_index: record.turn_count,
            at_time: elapsed,
        };
    }
    Ok(record)
}
