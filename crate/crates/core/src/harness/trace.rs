use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::Turn;
use crate::robot::Channel;

pub const TRACE_HEADER: [&str; 9] = ["t", "x", "y", "theta", "front", "left", "right", "phase", "event"];

/// One control tick: pose before the step, readings the controller saw,
/// phase it moved to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub front: f64,
    pub left: f64,
    pub right: f64,
    pub phase: String,
    pub event: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TraceEvent {
    /// Channels whose reading was replaced this tick.
    Misread([bool; 3]),
    /// The replaced reading changed the controller's next phase.
    MisreadAltered,
    TurnStart { index: usize, turn: Turn, shortfall: f64 },
    /// Heading error of the finished turn, radians.
    TurnDone { index: usize, error: f64 },
    Exit,
    Collision,
    Stuck,
    Timeout,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Misread(which) => {
                let names: Vec<&str> = Channel::ALL
                    .iter()
                    .zip(which)
                    .filter(|(_, &m)| m)
                    .map(|(c, _)| c.name())
                    .collect();
                write!(f, "misread:{}", names.join("+"))
            }
            TraceEvent::MisreadAltered => write!(f, "misread-altered"),
            TraceEvent::TurnStart { index, turn, shortfall } => {
                if *shortfall > 0.0 {
                    write!(f, "turn:{index}:{}:short={:.3}", turn.name(), shortfall.to_degrees())
                } else {
                    write!(f, "turn:{index}:{}", turn.name())
                }
            }
            TraceEvent::TurnDone { index, error } => {
                write!(f, "turn-done:{index}:err={:.3}", error.to_degrees())
            }
            TraceEvent::Exit => write!(f, "exit"),
            TraceEvent::Collision => write!(f, "collision"),
            TraceEvent::Stuck => write!(f, "stuck"),
            TraceEvent::Timeout => write!(f, "timeout"),
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("trace header must be `{}`", TRACE_HEADER.join(","))]
    Header,
    #[error("trace row {row}: bad number in column `{column}`")]
    Number { row: usize, column: &'static str },
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

pub fn write_trace_csv(rows: &[TraceRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(TRACE_HEADER).expect("write to memory");
    for r in rows {
        w.write_record([
            fixed(r.t),
            fixed(r.x),
            fixed(r.y),
            fixed(r.theta),
            fixed(r.front),
            fixed(r.left),
            fixed(r.right),
            r.phase.clone(),
            r.event.clone().unwrap_or_default(),
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn read_trace_csv(text: &str) -> Result<Vec<TraceRow>, TraceError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.iter().ne(TRACE_HEADER.iter().copied()) {
        return Err(TraceError::Header);
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |idx: usize| -> Result<f64, TraceError> {
            rec.get(idx)
                .and_then(|s| s.parse().ok())
                .ok_or(TraceError::Number {
                    row: i + 1,
                    column: TRACE_HEADER[idx],
                })
        };
        let event = rec.get(8).unwrap_or("");
        rows.push(TraceRow {
            t: num(0)?,
            x: num(1)?,
            y: num(2)?,
            theta: num(3)?,
            front: num(4)?,
            left: num(5)?,
            right: num(6)?,
            phase: rec.get(7).unwrap_or("").to_string(),
            event: (!event.is_empty()).then(|| event.to_string()),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, event: Option<&str>) -> TraceRow {
        TraceRow {
            t,
            x: 15.0,
            y: 105.0,
            theta: 0.0,
            front: 101.5,
            left: 6.0,
            right: 96.0,
            phase: "DriveForward".into(),
            event: event.map(str::to_string),
        }
    }

    #[test]
    fn csv_layout() {
        let text = write_trace_csv(&[row(0.0, None), row(0.05, Some("misread:front;misread-altered"))]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,y,theta,front,left,right,phase,event"));
        assert_eq!(
            lines.next(),
            Some("0.000000,15.000000,105.000000,0.000000,101.500000,6.000000,96.000000,DriveForward,")
        );
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![row(0.0, None), row(0.05, Some("turn:1:left"))];
        assert_eq!(read_trace_csv(&write_trace_csv(&rows)).unwrap(), rows);
        assert!(read_trace_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn event_text() {
        assert_eq!(TraceEvent::Misread([true, false, true]).to_string(), "misread:front+right");
        let e = TraceEvent::TurnStart {
            index: 2,
            turn: Turn::Left,
            shortfall: 0.0,
        };
        assert_eq!(e.to_string(), "turn:2:left");
        let e = TraceEvent::TurnDone {
            index: 2,
            error: 12f64.to_radians(),
        };
        assert_eq!(e.to_string(), "turn-done:2:err=12.000");
    }
}
