//! Brute-force reference implementations used to check the library.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use mazebot_core::maze::{CellIndex, Direction, Maze, MazeBuilder};
use rand::seq::SliceRandom;
use rand::Rng;

/// March along the ray in fixed steps of `h` cm and report the distance of
/// the first sample that lies past a walled grid line. `INFINITY` when the
/// ray leaves the board.
pub fn march_ray(maze: &Maze, origin: (f64, f64), dir: (f64, f64), h: f64) -> f64 {
    let cs = maze.cell_size();
    let n = dir.0.hypot(dir.1);
    let (dx, dy) = (dir.0 / n, dir.1 / n);
    let cell = |x: f64, y: f64| ((x / cs).floor() as i64, (y / cs).floor() as i64);
    let inside = |c: (i64, i64)| c.0 >= 0 && c.1 >= 0 && c.0 < maze.cols() as i64 && c.1 < maze.rows() as i64;
    let wall_between = |a: (i64, i64), b: (i64, i64)| -> bool {
        // Adjacent cells only; a is inside the board.
        let ca = CellIndex::new(a.0 as usize, a.1 as usize);
        let side = match (b.0 - a.0, b.1 - a.1) {
            (1, 0) => Direction::East,
            (-1, 0) => Direction::West,
            (0, 1) => Direction::North,
            (0, -1) => Direction::South,
            _ => unreachable!(),
        };
        maze.has_wall(ca, side)
    };
    let mut prev = cell(origin.0, origin.1);
    let mut k = 1u64;
    loop {
        let t = k as f64 * h;
        let (x, y) = (origin.0 + t * dx, origin.1 + t * dy);
        let cur = cell(x, y);
        if cur != prev {
            let blocked = if cur.0 != prev.0 && cur.1 != prev.1 {
                // Crossed a post between samples: blocked if either
                // L-shaped route is blocked at any leg.
                let via_x = (cur.0, prev.1);
                let via_y = (prev.0, cur.1);
                let leg = |a: (i64, i64), b: (i64, i64)| !inside(a) || !inside(b) || wall_between(a, b);
                leg(prev, via_x) || leg(via_x, cur) || leg(prev, via_y) || leg(via_y, cur)
            } else {
                wall_between(prev, cur)
            };
            if blocked {
                return t;
            }
            if !inside(cur) {
                return f64::INFINITY;
            }
            prev = cur;
        }
        k += 1;
    }
}

/// Fine-step Euler integration of the unicycle. Heading is sampled at the
/// middle of each sub-step when `midpoint` is set, at its start otherwise.
/// Heading advances by an exact rotation recurrence.
pub fn euler(pose: (f64, f64, f64), v: f64, omega: f64, dt: f64, steps: u64, midpoint: bool) -> (f64, f64, f64) {
    let h = dt / steps as f64;
    let (mut x, mut y) = (pose.0, pose.1);
    let offset = if midpoint { 0.5 * omega * h } else { 0.0 };
    let (mut s, mut c) = (pose.2 + offset).sin_cos();
    let (rs, rc) = (omega * h).sin_cos();
    for _ in 0..steps {
        x += v * h * c;
        y += v * h * s;
        let nc = c * rc - s * rs;
        s = s * rc + c * rs;
        c = nc;
    }
    (x, y, pose.2 + omega * dt)
}

/// Flood fill from the start over open edges.
pub fn flood_count(maze: &Maze) -> usize {
    let mut seen = vec![false; maze.cols() * maze.rows()];
    let mut stack = vec![maze.start()];
    let mut count = 0;
    while let Some(c) = stack.pop() {
        let id = c.row * maze.cols() + c.col;
        if seen[id] {
            continue;
        }
        seen[id] = true;
        count += 1;
        for d in [Direction::North, Direction::South, Direction::East, Direction::West] {
            if !maze.has_wall(c, d) {
                if let Some(n) = maze.adjacent(c, d) {
                    stack.push(n);
                }
            }
        }
    }
    count
}

/// Unit-weight Dijkstra from start to exit cell; number of moves.
pub fn dijkstra_moves(maze: &Maze) -> Option<usize> {
    let n = maze.cols() * maze.rows();
    let id = |c: CellIndex| c.row * maze.cols() + c.col;
    let mut dist = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[id(maze.start())] = 0;
    heap.push(Reverse((0usize, maze.start().col, maze.start().row)));
    while let Some(Reverse((d, col, row))) = heap.pop() {
        let c = CellIndex::new(col, row);
        if d > dist[id(c)] {
            continue;
        }
        for dir in Direction::ALL {
            if maze.has_wall(c, dir) {
                continue;
            }
            if let Some(nb) = maze.adjacent(c, dir) {
                if d + 1 < dist[id(nb)] {
                    dist[id(nb)] = d + 1;
                    heap.push(Reverse((d + 1, nb.col, nb.row)));
                }
            }
        }
    }
    let d = dist[id(maze.exit_cell())];
    (d != usize::MAX).then_some(d)
}

/// Random maze: a depth-first spanning tree with `extra` further walls
/// knocked out, exit on a random boundary side.
pub fn random_maze<R: Rng>(rng: &mut R, cols: usize, rows: usize, extra: usize) -> Maze {
    let start = CellIndex::new(rng.random_range(0..cols), rng.random_range(0..rows));
    let mut b = MazeBuilder::new(cols, rows).start(start, Direction::ALL[rng.random_range(0..4)]);
    let mut seen = vec![false; cols * rows];
    let mut stack = vec![start];
    seen[start.row * cols + start.col] = true;
    let neighbors = |c: CellIndex| -> Vec<(Direction, CellIndex)> {
        Direction::ALL
            .into_iter()
            .filter_map(|d| {
                let (dc, dr) = d.delta();
                let (nc, nr) = (c.col as i64 + dc, c.row as i64 + dr);
                (nc >= 0 && nr >= 0 && (nc as usize) < cols && (nr as usize) < rows)
                    .then(|| (d, CellIndex::new(nc as usize, nr as usize)))
            })
            .collect()
    };
    while let Some(&c) = stack.last() {
        let mut options: Vec<_> = neighbors(c)
            .into_iter()
            .filter(|(_, n)| !seen[n.row * cols + n.col])
            .collect();
        if options.is_empty() {
            stack.pop();
            continue;
        }
        options.shuffle(rng);
        let (d, n) = options[0];
        b.open_mut(c, d);
        seen[n.row * cols + n.col] = true;
        stack.push(n);
    }
    for _ in 0..extra {
        let c = CellIndex::new(rng.random_range(0..cols), rng.random_range(0..rows));
        let opts = neighbors(c);
        let (d, _) = opts[rng.random_range(0..opts.len())];
        b.open_mut(c, d);
    }
    let boundary: Vec<(CellIndex, Direction)> = (0..cols)
        .flat_map(|col| [(CellIndex::new(col, 0), Direction::South), (CellIndex::new(col, rows - 1), Direction::North)])
        .chain((0..rows).flat_map(|row| [(CellIndex::new(0, row), Direction::West), (CellIndex::new(cols - 1, row), Direction::East)]))
        .collect();
    let (cell, side) = boundary[rng.random_range(0..boundary.len())];
    b.exit(cell, side).build().unwrap()
}
