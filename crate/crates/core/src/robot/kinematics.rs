use super::{normalize_angle, Pose, RobotSpec};
use crate::maze::{Direction, Maze};

/// Unicycle update with exact arc integration.
///
/// The chord form `2·(v/ω)·sin(ωdt/2)` along the mid-arc heading stays
/// accurate for small `ω`, so nothing special happens near the straight
/// threshold.
pub fn step_kinematics(pose: Pose, v: f64, omega: f64, dt: f64) -> Pose {
    if omega.abs() < 1e-9 {
        let (s, c) = pose.theta.sin_cos();
        return Pose {
            x: pose.x + v * dt * c,
            y: pose.y + v * dt * s,
            theta: normalize_angle(pose.theta),
        };
    }
    let half = 0.5 * omega * dt;
    let chord = 2.0 * v / omega * half.sin();
    let (s, c) = (pose.theta + half).sin_cos();
    Pose {
        x: pose.x + chord * c,
        y: pose.y + chord * s,
        theta: normalize_angle(pose.theta + omega * dt),
    }
}

/// Point lies outside the board in the strip swept by the exit edge.
pub fn beyond_exit(maze: &Maze, (x, y): (f64, f64)) -> bool {
    let exit = maze.exit();
    let cs = maze.cell_size();
    let (lo_x, lo_y) = (exit.cell.col as f64 * cs, exit.cell.row as f64 * cs);
    let in_x = x >= lo_x && x <= lo_x + cs;
    let in_y = y >= lo_y && y <= lo_y + cs;
    match exit.side {
        Direction::East => x >= maze.width() && in_y,
        Direction::West => x <= 0.0 && in_y,
        Direction::North => y >= maze.height() && in_x,
        Direction::South => y <= 0.0 && in_x,
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Footprint strictly overlaps a walled segment, or the center has left
/// the board anywhere but through the exit.
pub fn check_collision(maze: &Maze, pose: &Pose, spec: &RobotSpec) -> bool {
    let p = (pose.x, pose.y);
    let r = spec.body_radius;
    let inside = p.0 >= 0.0 && p.1 >= 0.0 && p.0 <= maze.width() && p.1 <= maze.height();
    if !inside && !beyond_exit(maze, p) {
        return true;
    }
    let cs = maze.cell_size();
    let (cols, rows) = (maze.cols() as i64, maze.rows() as i64);
    let lines = |lo: f64, hi: f64, n: i64| ((lo / cs).ceil() as i64).max(0)..=((hi / cs).floor() as i64).min(n);
    let spans = |lo: f64, hi: f64, n: i64| ((lo / cs).floor() as i64).max(0)..=((hi / cs).floor() as i64).min(n - 1);

    for line in lines(p.0 - r, p.0 + r, cols) {
        for row in spans(p.1 - r, p.1 + r, rows) {
            if maze.vertical_wall(line as usize, row as usize) {
                let x = line as f64 * cs;
                let d = segment_distance(p, (x, row as f64 * cs), (x, (row + 1) as f64 * cs));
                if d < r {
                    return true;
                }
            }
        }
    }
    for line in lines(p.1 - r, p.1 + r, rows) {
        for col in spans(p.0 - r, p.0 + r, cols) {
            if maze.horizontal_wall(col as usize, line as usize) {
                let y = line as f64 * cs;
                let d = segment_distance(p, (col as f64 * cs, y), ((col + 1) as f64 * cs, y));
                if d < r {
                    return true;
                }
            }
        }
    }
    false
}
