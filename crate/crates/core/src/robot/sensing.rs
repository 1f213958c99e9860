use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use super::kinematics::beyond_exit;
use super::{Channel, NoiseModel, Pose, RobotSpec, SensorReading};
use crate::maze::Maze;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("ray origin ({x}, {y}) is outside the board")]
pub struct RayError {
    pub x: f64,
    pub y: f64,
}

/// Distance from `origin` along `direction` to the first walled edge.
///
/// Walls are zero-thickness segments on the cell grid. A ray that leaves the
/// board through the open exit edge returns `f64::INFINITY`. At a grid post
/// the ray stops if any of the four segments meeting there is walled.
pub fn ray_cast(maze: &Maze, origin: (f64, f64), direction: (f64, f64)) -> Result<f64, RayError> {
    let (x, y) = origin;
    let inside = x > 0.0 && y > 0.0 && x < maze.width() && y < maze.height();
    if !inside {
        return Err(RayError { x, y });
    }
    let norm = direction.0.hypot(direction.1);
    let (dx, dy) = (direction.0 / norm, direction.1 / norm);
    let cs = maze.cell_size();
    let (cols, rows) = (maze.cols() as i64, maze.rows() as i64);

    let mut col = ((x / cs).floor() as i64).min(cols - 1);
    let mut row = ((y / cs).floor() as i64).min(rows - 1);
    let step_x: i64 = if dx > 0.0 { 1 } else { -1 };
    let step_y: i64 = if dy > 0.0 { 1 } else { -1 };

    // Parametric distance to the next vertical / horizontal grid line.
    let next_x = |col: i64| -> f64 {
        if dx > 0.0 {
            ((col + 1) as f64 * cs - x) / dx
        } else if dx < 0.0 {
            (col as f64 * cs - x) / dx
        } else {
            f64::INFINITY
        }
    };
    let next_y = |row: i64| -> f64 {
        if dy > 0.0 {
            ((row + 1) as f64 * cs - y) / dy
        } else if dy < 0.0 {
            (row as f64 * cs - y) / dy
        } else {
            f64::INFINITY
        }
    };
    let vwall = |line: i64, row: i64| -> bool {
        (0..rows).contains(&row) && maze.vertical_wall(line as usize, row as usize)
    };
    let hwall = |col: i64, line: i64| -> bool {
        (0..cols).contains(&col) && maze.horizontal_wall(col as usize, line as usize)
    };

    loop {
        let tx = next_x(col);
        let ty = next_y(row);
        let line_x = if dx > 0.0 { col + 1 } else { col };
        let line_y = if dy > 0.0 { row + 1 } else { row };
        if tx < ty {
            if vwall(line_x, row) {
                return Ok(tx);
            }
            if line_x == 0 || line_x == cols {
                return Ok(f64::INFINITY);
            }
            col += step_x;
        } else if ty < tx {
            if hwall(col, line_y) {
                return Ok(ty);
            }
            if line_y == 0 || line_y == rows {
                return Ok(f64::INFINITY);
            }
            row += step_y;
        } else {
            let blocked = vwall(line_x, row)
                || vwall(line_x, row + step_y)
                || hwall(col, line_y)
                || hwall(col + step_x, line_y);
            if blocked {
                return Ok(tx);
            }
            if line_x == 0 || line_x == cols || line_y == 0 || line_y == rows {
                return Ok(f64::INFINITY);
            }
            col += step_x;
            row += step_y;
        }
    }
}

/// One noisy reading plus what went into it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSample {
    pub reading: SensorReading,
    /// Reading with gaussian noise but before any misread replacement.
    pub unreplaced: SensorReading,
    /// Per channel (front, left, right): the value was replaced.
    pub misread: [bool; 3],
}

impl SensorSample {
    pub fn any_misread(&self) -> bool {
        self.misread.iter().any(|&m| m)
    }
}

/// Ideal distance for one channel, before noise and clamping. A mount that
/// has already passed out through the exit sees nothing.
fn raw_channel(maze: &Maze, pose: &Pose, spec: &RobotSpec, channel: Channel) -> Result<f64, RayError> {
    let m = spec.mount(channel);
    let origin = pose.body_to_world(m.forward, m.left);
    if beyond_exit(maze, origin) {
        return Ok(f64::INFINITY);
    }
    let (sin, cos) = (pose.theta + m.angle).sin_cos();
    ray_cast(maze, origin, (cos, sin))
}

/// Read all three sensors. Each channel consumes exactly three draws
/// (gaussian, misread test, replacement) whatever the noise settings, so
/// the stream position depends only on the number of calls.
pub fn sense<R: Rng + ?Sized>(
    maze: &Maze,
    pose: &Pose,
    spec: &RobotSpec,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<SensorSample, RayError> {
    let mut reading = SensorReading {
        front: 0.0,
        left: 0.0,
        right: 0.0,
    };
    let mut unreplaced = reading;
    let mut misread = [false; 3];
    for (i, channel) in Channel::ALL.into_iter().enumerate() {
        let raw = raw_channel(maze, pose, spec, channel)?;
        let z: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.random();
        let replacement: f64 = rng.random();
        let noisy = if noise.gaussian_sigma > 0.0 {
            raw + noise.gaussian_sigma * z
        } else {
            raw
        };
        let value = noisy.clamp(0.0, spec.max_range);
        unreplaced.set(channel, value);
        if u < noise.misread_prob {
            misread[i] = true;
            reading.set(channel, replacement * spec.max_range);
        } else {
            reading.set(channel, value);
        }
    }
    Ok(SensorSample {
        reading,
        unreplaced,
        misread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::{parse_maze, CellIndex, Direction, MazeBuilder, REFERENCE_MAZE};
    use crate::robot::DEFAULT_FRONT_MOUNT;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn corridor(n: usize) -> Maze {
        let mut b = MazeBuilder::new(n, 1).start(CellIndex::new(0, 0), Direction::East);
        for c in 0..n - 1 {
            b.open_mut(CellIndex::new(c, 0), Direction::East);
        }
        b.exit(CellIndex::new(n - 1, 0), Direction::East).build().unwrap()
    }

    #[test]
    fn axis_aligned_hits() {
        let single = MazeBuilder::new(1, 2)
            .exit(CellIndex::new(0, 0), Direction::West)
            .build()
            .unwrap();
        assert_eq!(ray_cast(&single, (15.0, 15.0), (0.0, 1.0)).unwrap(), 15.0);
        let open = MazeBuilder::new(1, 2)
            .open(CellIndex::new(0, 0), Direction::North)
            .exit(CellIndex::new(0, 0), Direction::West)
            .build()
            .unwrap();
        assert_eq!(ray_cast(&open, (15.0, 15.0), (0.0, 1.0)).unwrap(), 45.0);
    }

    #[test]
    fn through_the_exit_is_unbounded() {
        let m = corridor(3);
        assert_eq!(ray_cast(&m, (15.0, 15.0), (1.0, 0.0)).unwrap(), f64::INFINITY);
        assert_eq!(ray_cast(&m, (15.0, 15.0), (-1.0, 0.0)).unwrap(), 15.0);
    }

    #[test]
    fn origin_outside_is_an_error() {
        let m = corridor(2);
        assert!(ray_cast(&m, (-1.0, 15.0), (1.0, 0.0)).is_err());
        assert!(ray_cast(&m, (30.0, 30.0), (1.0, 0.0)).is_err());
    }

    #[test]
    fn diagonal_ray() {
        let m = parse_maze(REFERENCE_MAZE).unwrap();
        // From the start cell the north-east diagonal meets the north
        // boundary 15 cm above.
        let d = ray_cast(&m, (15.0, 105.0), (1.0, 1.0)).unwrap();
        assert!((d - 15.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn noiseless_sense_matches_ray_cast() {
        let m = parse_maze(REFERENCE_MAZE).unwrap();
        let spec = RobotSpec::default();
        let pose = Pose::new(15.0, 105.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sense(&m, &pose, &spec, &NoiseModel::default(), &mut rng).unwrap();
        assert!(!s.any_misread());
        assert_eq!(s.reading.front, 120.0 - 15.0 - DEFAULT_FRONT_MOUNT);
        assert_eq!(s.reading.left, 15.0 - 9.0);
        // South opens into the side room down to the board edge.
        assert_eq!(s.reading.right, 105.0 - 9.0);
    }

    #[test]
    fn exit_reads_max_range() {
        let m = corridor(12);
        let spec = RobotSpec::default();
        let pose = Pose::new(45.0, 15.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sense(&m, &pose, &spec, &NoiseModel::default(), &mut rng).unwrap();
        assert_eq!(s.reading.front, 250.0);
    }

    #[test]
    fn seeded_noise_is_repeatable() {
        let m = parse_maze(REFERENCE_MAZE).unwrap();
        let spec = RobotSpec::default();
        let noise = NoiseModel {
            gaussian_sigma: 1.0,
            ..Default::default()
        };
        let pose = Pose::new(15.0, 105.0, 0.0);
        let a = sense(&m, &pose, &spec, &noise, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = sense(&m, &pose, &spec, &noise, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.reading.left, 6.0);
    }

    #[test]
    fn certain_misread_replaces_every_channel() {
        let m = parse_maze(REFERENCE_MAZE).unwrap();
        let spec = RobotSpec::default();
        let noise = NoiseModel {
            misread_prob: 1.0,
            ..Default::default()
        };
        let pose = Pose::new(15.0, 105.0, 0.0);
        let s = sense(&m, &pose, &spec, &noise, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(s.misread, [true; 3]);
        assert_eq!(s.unreplaced.left, 6.0);
        for c in Channel::ALL {
            assert!((0.0..=250.0).contains(&s.reading.get(c)));
        }
    }
}
