use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{CellIndex, Direction, Maze, MazeBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("cannot place a path with {turns} turns in a {cols}x{rows} grid")]
    Infeasible {
        cols: usize,
        rows: usize,
        turns: usize,
    },
}

const RESTARTS: usize = 64;
const NODE_BUDGET: usize = 20_000;

struct PathSearch {
    cols: usize,
    rows: usize,
    turns: usize,
    min_each_side: usize,
    rng: ChaCha8Rng,
    visited: Vec<bool>,
    cells: Vec<CellIndex>,
    moves: Vec<Direction>,
    budget: usize,
}

impl PathSearch {
    fn id(&self, c: CellIndex) -> usize {
        c.row * self.cols + c.col
    }

    fn step(&self, c: CellIndex, d: Direction) -> Option<CellIndex> {
        let (dc, dr) = d.delta();
        let col = c.col as i64 + dc;
        let row = c.row as i64 + dr;
        (col >= 0 && row >= 0 && (col as usize) < self.cols && (row as usize) < self.rows)
            .then(|| CellIndex::new(col as usize, row as usize))
    }

    /// Free run of unvisited cells ahead of the path head.
    fn free_run(&self, dir: Direction) -> Vec<CellIndex> {
        let mut run = Vec::new();
        let mut cur = *self.cells.last().unwrap();
        while let Some(next) = self.step(cur, dir) {
            if self.visited[self.id(next)] {
                break;
            }
            run.push(next);
            cur = next;
        }
        run
    }

    fn push_run(&mut self, run: &[CellIndex], dir: Direction) {
        for &c in run {
            let id = self.id(c);
            self.visited[id] = true;
            self.cells.push(c);
            self.moves.push(dir);
        }
    }

    fn pop_run(&mut self, len: usize) {
        for _ in 0..len {
            let c = self.cells.pop().unwrap();
            let id = self.id(c);
            self.visited[id] = false;
            self.moves.pop();
        }
    }

    /// Lay the next straight segment heading `dir`; `left`/`right` count
    /// corners placed so far.
    fn extend(&mut self, dir: Direction, left: usize, right: usize) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        let run = self.free_run(dir);
        if run.is_empty() {
            return false;
        }
        let placed = left + right;

        if placed == self.turns {
            // The last segment must run straight out through the boundary.
            let last = *run.last().unwrap();
            if self.step(last, dir).is_some() {
                return false;
            }
            if left < self.min_each_side || right < self.min_each_side {
                return false;
            }
            self.push_run(&run, dir);
            return true;
        }

        let mut lengths: Vec<usize> = (1..=run.len()).collect();
        lengths.shuffle(&mut self.rng);
        for len in lengths {
            self.push_run(&run[..len], dir);
            let mut sides = [true, false];
            sides.shuffle(&mut self.rng);
            for go_left in sides {
                let (l, r) = if go_left { (left + 1, right) } else { (left, right + 1) };
                let remaining = self.turns - placed - 1;
                let need = self.min_each_side.saturating_sub(l) + self.min_each_side.saturating_sub(r);
                if need > remaining {
                    continue;
                }
                let next_dir = if go_left { dir.left() } else { dir.right() };
                if self.extend(next_dir, l, r) {
                    return true;
                }
                if self.budget == 0 {
                    self.pop_run(len);
                    return false;
                }
            }
            self.pop_run(len);
        }
        false
    }
}

/// Random single-corridor maze whose start→exit path has exactly `turns`
/// corners and satisfies the greedy clearance rule. With `turns ≥ 4` the
/// path has at least two left-hand and two right-hand corners. Cells off
/// the path stay fully walled. Deterministic for a given seed.
pub fn generate_intermediate(
    cols: usize,
    rows: usize,
    turns: usize,
    rng_seed: u64,
) -> Result<Maze, GenerateError> {
    let infeasible = GenerateError::Infeasible { cols, rows, turns };
    if cols == 0 || rows == 0 || cols * rows < 2 + turns {
        return Err(infeasible);
    }
    if turns > 0 && (cols == 1 || rows == 1) {
        return Err(infeasible);
    }

    let mut search = PathSearch {
        cols,
        rows,
        turns,
        min_each_side: if turns >= 4 { 2 } else { 0 },
        rng: ChaCha8Rng::seed_from_u64(rng_seed),
        visited: vec![false; cols * rows],
        cells: Vec::new(),
        moves: Vec::new(),
        budget: 0,
    };

    for _ in 0..RESTARTS {
        let start = CellIndex::new(search.rng.random_range(0..cols), search.rng.random_range(0..rows));
        let heading = Direction::ALL[search.rng.random_range(0..4)];
        search.visited.iter_mut().for_each(|v| *v = false);
        search.cells.clear();
        search.moves.clear();
        let start_id = search.id(start);
        search.visited[start_id] = true;
        search.cells.push(start);
        search.budget = NODE_BUDGET;
        if search.extend(heading, 0, 0) {
            let exit_side = *search.moves.last().unwrap();
            let mut builder = MazeBuilder::new(cols, rows)
                .start(start, heading)
                .exit(*search.cells.last().unwrap(), exit_side);
            for (w, &d) in search.cells.windows(2).zip(&search.moves) {
                builder.open_mut(w[0], d);
            }
            return Ok(builder.build().expect("generated path stays in bounds"));
        }
    }
    Err(infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::validate;
    use crate::search::{build_graph, solve_bfs};

    #[test]
    fn reference_sized_maze_has_six_corners() {
        for seed in 0..10 {
            let m = generate_intermediate(8, 4, 6, seed).unwrap();
            let path = solve_bfs(&build_graph(&m).unwrap());
            assert_eq!(path.corners(), 6);
            let (l, r) = path.turn_counts();
            assert!(l >= 2 && r >= 2, "seed {seed}: {l} left, {r} right");
            assert!(validate(&m).is_ok());
        }
    }

    #[test]
    fn straight_corridor() {
        let m = generate_intermediate(2, 1, 0, 3).unwrap();
        let path = solve_bfs(&build_graph(&m).unwrap());
        assert_eq!(path.moves(), 1);
        assert_eq!(path.corners(), 0);
    }

    #[test]
    fn same_seed_same_maze() {
        assert_eq!(
            generate_intermediate(10, 6, 5, 42).unwrap(),
            generate_intermediate(10, 6, 5, 42).unwrap()
        );
    }

    #[test]
    fn infeasible_requests() {
        assert!(generate_intermediate(5, 1, 1, 0).is_err());
        assert!(generate_intermediate(2, 2, 6, 0).is_err());
        assert!(generate_intermediate(1, 1, 0, 0).is_err());
        assert!(generate_intermediate(0, 4, 0, 0).is_err());
    }
}
