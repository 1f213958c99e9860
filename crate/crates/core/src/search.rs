//! Discrete search over the maze's corridor graph.
//!
//! [`solve_bfs`] is the unweighted ground truth. [`graph_hill_climb`] is the
//! grid analogue of the robot's reactive rule: keep going straight, and at a
//! blocked cell step toward the lateral arm with more open cells ahead.
//! Agreement between the two on a maze is what makes it solvable without
//! backtracking.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::controller::{TieBreak, Turn};
use crate::maze::{CellIndex, Direction, Maze};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("exit cell {0} is unreachable from start")]
    ExitUnreachable(CellIndex),
}

/// Reachable cells and open adjacencies of a maze.
#[derive(Debug, Clone)]
pub struct CorridorGraph {
    cols: usize,
    rows: usize,
    reachable: Vec<bool>,
    /// `open[id][dir as usize]`: corridor edge to the neighbor in `dir`
    open: Vec<[bool; 4]>,
    start: CellIndex,
    start_heading: Direction,
    exit_cell: CellIndex,
}

impl CorridorGraph {
    pub fn start(&self) -> CellIndex {
        self.start
    }

    pub fn exit_cell(&self) -> CellIndex {
        self.exit_cell
    }

    fn id(&self, cell: CellIndex) -> usize {
        cell.row * self.cols + cell.col
    }

    /// Reachable cells in row-major order.
    pub fn nodes(&self) -> Vec<CellIndex> {
        (0..self.rows)
            .flat_map(|row| (0..self.cols).map(move |col| CellIndex::new(col, row)))
            .filter(|&c| self.reachable[self.id(c)])
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.reachable.iter().filter(|&&r| r).count()
    }

    /// Undirected edges between reachable cells, each listed once from its
    /// south/west end.
    pub fn edges(&self) -> Vec<(CellIndex, CellIndex)> {
        let mut out = Vec::new();
        for cell in self.nodes() {
            for dir in [Direction::East, Direction::North] {
                if let Some(n) = self.neighbor(cell, dir) {
                    out.push((cell, n));
                }
            }
        }
        out
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        cell.col < self.cols && cell.row < self.rows && self.reachable[self.id(cell)]
    }

    /// Open neighbor of a reachable cell.
    pub fn neighbor(&self, cell: CellIndex, dir: Direction) -> Option<CellIndex> {
        if !self.contains(cell) || !self.open[self.id(cell)][dir as usize] {
            return None;
        }
        let (dc, dr) = dir.delta();
        Some(CellIndex::new(
            (cell.col as i64 + dc) as usize,
            (cell.row as i64 + dr) as usize,
        ))
    }

    pub fn neighbors(&self, cell: CellIndex) -> impl Iterator<Item = CellIndex> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| self.neighbor(cell, d))
    }

    /// BFS from start, optionally ignoring one undirected edge.
    fn bfs(&self, skip: Option<(CellIndex, CellIndex)>) -> Vec<Option<CellIndex>> {
        let mut parent: Vec<Option<CellIndex>> = vec![None; self.cols * self.rows];
        let mut seen = vec![false; self.cols * self.rows];
        let mut queue = VecDeque::from([self.start]);
        seen[self.id(self.start)] = true;
        while let Some(cell) = queue.pop_front() {
            for next in self.neighbors(cell) {
                if let Some((a, b)) = skip {
                    if (cell, next) == (a, b) || (cell, next) == (b, a) {
                        continue;
                    }
                }
                let id = self.id(next);
                if !seen[id] {
                    seen[id] = true;
                    parent[id] = Some(cell);
                    queue.push_back(next);
                }
            }
        }
        parent
    }

    fn reaches_exit_without(&self, skip: (CellIndex, CellIndex)) -> bool {
        if self.start == self.exit_cell {
            return true;
        }
        self.bfs(Some(skip))[self.id(self.exit_cell)].is_some()
    }

    /// Whether exactly one simple path joins start and exit: true iff every
    /// edge of one shortest path is a bridge.
    pub fn has_unique_path(&self) -> bool {
        let path = solve_bfs(self);
        path.cells()
            .windows(2)
            .all(|w| !self.reaches_exit_without((w[0], w[1])))
    }
}

/// Build the corridor graph by flood fill from the start cell.
pub fn build_graph(maze: &Maze) -> Result<CorridorGraph, SearchError> {
    let reachable = maze.reachable_cells();
    let exit_cell = maze.exit_cell();
    if !reachable[maze.cell_id(exit_cell)] {
        return Err(SearchError::ExitUnreachable(exit_cell));
    }
    let open = maze
        .cells()
        .map(|cell| Direction::ALL.map(|d| maze.open_neighbor(cell, d).is_some()))
        .collect();
    Ok(CorridorGraph {
        cols: maze.cols(),
        rows: maze.rows(),
        reachable,
        open,
        start: maze.start(),
        start_heading: maze.start_heading(),
        exit_cell,
    })
}

/// Ordered cells from start to exit cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellPath(pub Vec<CellIndex>);

impl CellPath {
    pub fn cells(&self) -> &[CellIndex] {
        &self.0
    }

    pub fn moves(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Direction of each move.
    pub fn directions(&self) -> Vec<Direction> {
        self.0
            .windows(2)
            .map(|w| {
                let dc = w[1].col as i64 - w[0].col as i64;
                let dr = w[1].row as i64 - w[0].row as i64;
                match (dc, dr) {
                    (1, 0) => Direction::East,
                    (-1, 0) => Direction::West,
                    (0, 1) => Direction::North,
                    (0, -1) => Direction::South,
                    _ => panic!("cells {} and {} are not adjacent", w[0], w[1]),
                }
            })
            .collect()
    }

    /// Number of direction changes along the path.
    pub fn corners(&self) -> usize {
        self.directions().windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Left and right corner counts.
    pub fn turn_counts(&self) -> (usize, usize) {
        let dirs = self.directions();
        let left = dirs.windows(2).filter(|w| w[1] == w[0].left()).count();
        let right = dirs.windows(2).filter(|w| w[1] == w[0].right()).count();
        (left, right)
    }

    /// JSON array of `[col,row]` pairs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cell path serializes")
    }
}

impl Serialize for CellPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|c| [c.col, c.row]))
    }
}

/// Shortest start→exit path by move count. Ties break by neighbor order
/// E, N, W, S.
pub fn solve_bfs(graph: &CorridorGraph) -> CellPath {
    let parent = graph.bfs(None);
    let mut cells = vec![graph.exit_cell];
    let mut cur = graph.exit_cell;
    while cur != graph.start {
        cur = parent[graph.id(cur)].expect("exit is reachable in a built graph");
        cells.push(cur);
    }
    cells.reverse();
    CellPath(cells)
}

/// Open cells ahead of `cell` in `dir` before the first wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clearance {
    Cells(usize),
    /// The ray leaves the board through the exit.
    Unbounded,
}

pub fn clearance_cells(maze: &Maze, cell: CellIndex, dir: Direction) -> Clearance {
    let mut count = 0;
    let mut cur = cell;
    loop {
        if maze.is_exit(cur, dir) {
            return Clearance::Unbounded;
        }
        match maze.open_neighbor(cur, dir) {
            Some(next) => {
                count += 1;
                cur = next;
            }
            None => return Clearance::Cells(count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClimbOutcome {
    Reached(CellPath),
    /// No lateral continuation at `at`, or the walk would re-enter a cell.
    Stuck { partial: CellPath, at: CellIndex },
}

impl ClimbOutcome {
    pub fn path(&self) -> Option<&CellPath> {
        match self {
            ClimbOutcome::Reached(p) => Some(p),
            ClimbOutcome::Stuck { .. } => None,
        }
    }
}

/// Side with more clearance, ties resolved by policy.
pub fn choose_side(left: Clearance, right: Clearance, tie_break: TieBreak) -> Turn {
    match left.cmp(&right) {
        Ordering::Greater => Turn::Left,
        Ordering::Less => Turn::Right,
        Ordering::Equal => tie_break.side(),
    }
}

/// Hill-climbing walk on the corridor graph starting at the maze's start
/// pose.
pub fn graph_hill_climb(graph: &CorridorGraph, maze: &Maze, tie_break: TieBreak) -> ClimbOutcome {
    let mut visited = vec![false; graph.cols * graph.rows];
    let mut cells = vec![graph.start];
    visited[graph.id(graph.start)] = true;
    let mut cell = graph.start;
    let mut heading = graph.start_heading;

    while cell != graph.exit_cell {
        let next = match graph.neighbor(cell, heading) {
            Some(n) => n,
            None => {
                let left = clearance_cells(maze, cell, heading.left());
                let right = clearance_cells(maze, cell, heading.right());
                if left == Clearance::Cells(0) && right == Clearance::Cells(0) {
                    return ClimbOutcome::Stuck {
                        partial: CellPath(cells),
                        at: cell,
                    };
                }
                heading = match choose_side(left, right, tie_break) {
                    Turn::Left => heading.left(),
                    Turn::Right => heading.right(),
                };
                match graph.neighbor(cell, heading) {
                    Some(n) => n,
                    None => {
                        return ClimbOutcome::Stuck {
                            partial: CellPath(cells),
                            at: cell,
                        }
                    }
                }
            }
        };
        let id = graph.id(next);
        if visited[id] {
            return ClimbOutcome::Stuck {
                partial: CellPath(cells),
                at: next,
            };
        }
        visited[id] = true;
        cells.push(next);
        cell = next;
    }
    ClimbOutcome::Reached(CellPath(cells))
}

/// Length in cm of the cell path: moves × cell size.
pub fn path_length_cm(path: &CellPath, cell_size: f64) -> f64 {
    path.moves() as f64 * cell_size
}
