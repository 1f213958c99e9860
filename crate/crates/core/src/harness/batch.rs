use rayon::prelude::*;
use serde::Serialize;

use super::{run_trial, FailureMode, TrialConfig, TrialError, TrialRecord};

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` (0-based) in a batch: one SplitMix64 step from
/// `seed + (index + 1)·γ`. Independent of scheduling.
pub fn seed_for_trial(seed: u64, index: usize) -> u64 {
    splitmix64(seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Run `trials` trials on `jobs` worker threads (0 = rayon default).
/// Results come back in trial order.
pub fn run_batch_records(config: &TrialConfig, trials: usize, jobs: usize) -> Result<Vec<TrialRecord>, TrialError> {
    config.check()?;
    let one = |i: usize| {
        let mut c = config.clone();
        c.seed = seed_for_trial(config.seed, i);
        run_trial(&c)
    };
    if jobs == 1 {
        return (0..trials).map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(one).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchRow {
    /// 1-based.
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub result: String,
    /// Failure reason, `-` on success.
    pub reason: String,
    pub mode: Option<FailureMode>,
    pub turns: usize,
    pub elapsed: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub rows: Vec<BatchRow>,
}

impl BatchReport {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let rows: Vec<BatchRow> = records
            .iter()
            .enumerate()
            .map(|(i, r)| BatchRow {
                trial: i + 1,
                seed: r.seed,
                success: r.outcome.is_success(),
                result: r.outcome.result_text(),
                reason: r.outcome.mode().map_or("-", FailureMode::reason).to_string(),
                mode: r.outcome.mode(),
                turns: r.turn_count,
                elapsed: r.elapsed,
                distance: r.distance,
            })
            .collect();
        let successes = rows.iter().filter(|r| r.success).count();
        BatchReport {
            trials: rows.len(),
            successes,
            success_rate: if rows.is_empty() {
                0.0
            } else {
                successes as f64 / rows.len() as f64
            },
            rows,
        }
    }

    pub fn count(&self, mode: FailureMode) -> usize {
        self.rows.iter().filter(|r| r.mode == Some(mode)).count()
    }

    /// Column-aligned table, one line per trial, then a success-rate line.
    pub fn to_text(&self) -> String {
        let header = ["Trial", "Result", "Reason", "Turns", "Time (s)", "Distance (cm)"];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.trial.to_string(),
                    r.result.clone(),
                    r.reason.clone(),
                    r.turns.to_string(),
                    format!("{:.2}", r.elapsed),
                    format!("{:.2}", r.distance),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |items: &[&str]| -> String {
            let mut s = String::new();
            for (i, (item, w)) in items.iter().zip(&widths).enumerate() {
                if i + 1 == items.len() {
                    s.push_str(item);
                } else {
                    s.push_str(&format!("{item:<w$}  "));
                }
            }
            s.trim_end().to_string()
        };
        let mut out = line(&header);
        out.push('\n');
        for row in &cells {
            let refs: Vec<&str> = row.iter().map(String::as_str).collect();
            out.push_str(&line(&refs));
            out.push('\n');
        }
        out.push_str(&format!(
            "success rate: {}/{} ({:.1}%)\n",
            self.successes,
            self.trials,
            100.0 * self.success_rate
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_batch(config: &TrialConfig, trials: usize, jobs: usize) -> Result<BatchReport, TrialError> {
    Ok(BatchReport::from_records(&run_batch_records(config, trials, jobs)?))
}
