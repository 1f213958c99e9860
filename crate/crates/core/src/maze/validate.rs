use serde::Serialize;

use super::{CellIndex, Maze};
use crate::search::{build_graph, clearance_cells, solve_bfs, Clearance};

/// Structural report for a maze.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// The exit cell is reachable from the start cell.
    pub connected: bool,
    /// Exactly one simple corridor path joins start and exit.
    pub unique_path: bool,
    /// Following the straight corridor and, at each blocked cell, the lateral
    /// arm with strictly more open cells ahead traces the unique path and
    /// leaves through the exit.
    pub greedy_admissible: bool,
    /// Reachable cells with a single open side, other than the start.
    pub dead_end_cells: Vec<CellIndex>,
    pub violations: Vec<String>,
}

impl ValidationReport {
    /// Connected, unique, greedy-admissible and free of dead ends.
    pub fn is_ok(&self) -> bool {
        self.connected && self.unique_path && self.greedy_admissible && self.dead_end_cells.is_empty()
    }
}

fn describe(c: Clearance) -> String {
    match c {
        Clearance::Cells(n) => format!("{n} cells"),
        Clearance::Unbounded => "open to the exit".to_string(),
    }
}

pub fn validate(maze: &Maze) -> ValidationReport {
    let mut violations = Vec::new();
    let reachable = maze.reachable_cells();
    let dead_end_cells: Vec<CellIndex> = maze
        .cells()
        .filter(|&c| reachable[maze.cell_id(c)] && c != maze.start() && maze.corridor_degree(c) == 1)
        .collect();
    for cell in &dead_end_cells {
        violations.push(format!("dead end at {cell}"));
    }

    let graph = match build_graph(maze) {
        Ok(g) => g,
        Err(e) => {
            violations.push(e.to_string());
            return ValidationReport {
                connected: false,
                unique_path: false,
                greedy_admissible: false,
                dead_end_cells,
                violations,
            };
        }
    };

    let unique_path = graph.has_unique_path();
    if !unique_path {
        violations.push("more than one simple path joins start and exit".to_string());
    }

    let mut greedy_ok = unique_path;
    if unique_path {
        let path = solve_bfs(&graph);
        let cells = path.cells();
        let mut moves = path.directions();
        // Leaving the board through the exit is the final move.
        moves.push(maze.exit().side);
        let mut heading = maze.start_heading();
        for (&cell, &next) in cells.iter().zip(&moves) {
            let straight_open =
                maze.open_neighbor(cell, heading).is_some() || maze.is_exit(cell, heading);
            if straight_open {
                if next != heading {
                    violations.push(format!(
                        "path turns at {cell} where the corridor continues straight"
                    ));
                    greedy_ok = false;
                    break;
                }
                continue;
            }
            let left = clearance_cells(maze, cell, heading.left());
            let right = clearance_cells(maze, cell, heading.right());
            let (taken, other, side) = if next == heading.left() {
                (left, right, "left")
            } else if next == heading.right() {
                (right, left, "right")
            } else {
                violations.push(format!("path doubles back at {cell}"));
                greedy_ok = false;
                break;
            };
            if taken <= other {
                violations.push(format!(
                    "at decision cell {cell} the {side} arm ({}) does not exceed the other arm ({})",
                    describe(taken),
                    describe(other)
                ));
                greedy_ok = false;
                break;
            }
            heading = next;
        }
    }

    ValidationReport {
        connected: true,
        unique_path,
        greedy_admissible: greedy_ok,
        dead_end_cells,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::{parse_maze, Direction, MazeBuilder, REFERENCE_MAZE};

    #[test]
    fn reference_maze_is_admissible() {
        let r = validate(&parse_maze(REFERENCE_MAZE).unwrap());
        assert!(r.connected && r.unique_path && r.greedy_admissible, "{r:?}");
        assert!(r.dead_end_cells.is_empty());
        assert!(r.violations.is_empty());
    }

    #[test]
    fn two_cell_maze_passes() {
        let m = MazeBuilder::new(2, 1)
            .open(CellIndex::new(0, 0), Direction::East)
            .exit(CellIndex::new(1, 0), Direction::East)
            .build()
            .unwrap();
        let r = validate(&m);
        assert!(r.is_ok());
        assert!(r.dead_end_cells.is_empty());
    }

    #[test]
    fn t_junction_with_long_dead_arm() {
        // Stem (1,0)->(1,2); west arm of one cell leads south to the exit,
        // east arm of two cells dead-ends.
        let m = MazeBuilder::new(4, 3)
            .start(CellIndex::new(1, 0), Direction::North)
            .open(CellIndex::new(1, 0), Direction::North)
            .open(CellIndex::new(1, 1), Direction::North)
            .open(CellIndex::new(1, 2), Direction::West)
            .open(CellIndex::new(1, 2), Direction::East)
            .open(CellIndex::new(2, 2), Direction::East)
            .open(CellIndex::new(0, 2), Direction::South)
            .exit(CellIndex::new(0, 1), Direction::West)
            .build()
            .unwrap();
        let r = validate(&m);
        assert!(r.connected);
        assert!(r.unique_path);
        assert!(!r.greedy_admissible);
        assert_eq!(r.dead_end_cells, vec![CellIndex::new(3, 2)]);
        assert!(r.violations.iter().any(|v| v.contains("decision cell (1,2)")));
    }

    #[test]
    fn loop_breaks_uniqueness() {
        let m = MazeBuilder::new(2, 2)
            .open(CellIndex::new(0, 0), Direction::East)
            .open(CellIndex::new(0, 0), Direction::North)
            .open(CellIndex::new(1, 0), Direction::North)
            .open(CellIndex::new(0, 1), Direction::East)
            .exit(CellIndex::new(1, 1), Direction::North)
            .build()
            .unwrap();
        let r = validate(&m);
        assert!(r.connected);
        assert!(!r.unique_path);
        assert!(!r.greedy_admissible);
    }

    #[test]
    fn unreachable_exit_reported() {
        let m = MazeBuilder::new(2, 1)
            .exit(CellIndex::new(1, 0), Direction::East)
            .build()
            .unwrap();
        let r = validate(&m);
        assert!(!r.connected && !r.unique_path && !r.greedy_admissible);
        assert!(!r.violations.is_empty());
    }

    #[test]
    fn turning_past_an_open_corridor_is_not_greedy() {
        // Path turns north at (1,0) although the corridor continues east
        // into a side pocket.
        let m = MazeBuilder::new(3, 2)
            .open(CellIndex::new(0, 0), Direction::East)
            .open(CellIndex::new(1, 0), Direction::East)
            .open(CellIndex::new(1, 0), Direction::North)
            .exit(CellIndex::new(1, 1), Direction::North)
            .build()
            .unwrap();
        let r = validate(&m);
        assert!(r.unique_path);
        assert!(!r.greedy_admissible);
        assert_eq!(r.dead_end_cells, vec![CellIndex::new(2, 0)]);
    }
}
