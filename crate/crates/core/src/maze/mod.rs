//! Corridor mazes on a square cell grid.
//!
//! Walls are infinitely thin segments lying on cell boundaries. The board
//! origin is its southwest corner, `x` grows east along columns and `y`
//! grows north along rows, so cell `(c, r)` spans
//! `[c·s, (c+1)·s] × [r·s, (r+1)·s]` for cell size `s`.

mod format;
mod generate;
mod validate;

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{parse_maze, serialize_maze, ParseError, ParseErrorKind};
pub use generate::{generate_intermediate, GenerateError};
pub use validate::{validate, ValidationReport};

/// Default corridor width in cm.
pub const DEFAULT_CELL_SIZE: f64 = 30.0;
/// Default wall height in cm. Carried as metadata only.
pub const DEFAULT_WALL_HEIGHT: f64 = 15.0;

/// The shipped 8×4 reference maze.
pub const REFERENCE_MAZE: &str = include_str!("../../mazes/reference.maze");

/// Cardinal direction, used both for cell sides and for headings.
///
/// Declaration order (E, N, W, S) is the neighbor order used for
/// deterministic breadth-first tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    East,
    North,
    West,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::East,
        Direction::North,
        Direction::West,
        Direction::South,
    ];

    /// Quarter turn counterclockwise.
    pub fn left(self) -> Self {
        match self {
            Direction::East => Direction::North,
            Direction::North => Direction::West,
            Direction::West => Direction::South,
            Direction::South => Direction::East,
        }
    }

    /// Quarter turn clockwise.
    pub fn right(self) -> Self {
        match self {
            Direction::East => Direction::South,
            Direction::North => Direction::East,
            Direction::West => Direction::North,
            Direction::South => Direction::West,
        }
    }

    pub fn opposite(self) -> Self {
        self.left().left()
    }

    /// Unit step in grid coordinates.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Direction::East => (1, 0),
            Direction::North => (0, 1),
            Direction::West => (-1, 0),
            Direction::South => (0, -1),
        }
    }

    /// Heading angle in radians, counterclockwise from east.
    pub fn angle(self) -> f64 {
        match self {
            Direction::East => 0.0,
            Direction::North => FRAC_PI_2,
            Direction::West => PI,
            Direction::South => 3.0 * FRAC_PI_2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::East => 'E',
            Direction::North => 'N',
            Direction::West => 'W',
            Direction::South => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'E' => Some(Direction::East),
            'N' => Some(Direction::North),
            'W' => Some(Direction::West),
            'S' => Some(Direction::South),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// 0-based cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub col: usize,
    pub row: usize,
}

impl CellIndex {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// One side of one cell.
///
/// In canonical form an interior edge is named from its south or west
/// cell (`North` / `East` side), and a boundary edge from the only cell
/// that touches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WallEdge {
    pub cell: CellIndex,
    pub side: Direction,
}

impl WallEdge {
    pub const fn new(cell: CellIndex, side: Direction) -> Self {
        Self { cell, side }
    }

    /// Canonical name of this edge in a `cols × rows` grid.
    pub fn canonical(self, cols: usize, rows: usize) -> Self {
        let CellIndex { col, row } = self.cell;
        match self.side {
            Direction::South if row > 0 => Self::new(CellIndex::new(col, row - 1), Direction::North),
            Direction::West if col > 0 => Self::new(CellIndex::new(col - 1, row), Direction::East),
            _ => {
                debug_assert!(col < cols && row < rows);
                self
            }
        }
    }

    pub fn is_boundary(self, cols: usize, rows: usize) -> bool {
        let CellIndex { col, row } = self.cell;
        match self.side {
            Direction::East => col + 1 == cols,
            Direction::West => col == 0,
            Direction::North => row + 1 == rows,
            Direction::South => row == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MazeError {
    #[error("maze must have at least one column and one row (got {cols}x{rows})")]
    InvalidDimensions { cols: usize, rows: usize },
    #[error("cell size must be positive (got {0})")]
    NonPositiveCellSize(f64),
    #[error("cell {cell} is outside the {cols}x{rows} grid")]
    CellOutOfBounds {
        cell: CellIndex,
        cols: usize,
        rows: usize,
    },
    #[error("exit edge {side} of {cell} is not on the boundary")]
    ExitNotOnBoundary { cell: CellIndex, side: Direction },
    #[error("boundary edge {side} of {cell} can only be opened as the exit")]
    BoundaryOpen { cell: CellIndex, side: Direction },
    #[error("no exit edge set")]
    MissingExit,
    #[error("exit is unreachable from start")]
    ExitUnreachable,
}

/// A rectangular corridor maze with a start pose and a single open exit
/// edge on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Maze {
    cols: usize,
    rows: usize,
    cell_size: f64,
    wall_height: f64,
    start: CellIndex,
    heading: Direction,
    exit: WallEdge,
    // vertical[row * (cols + 1) + line]: wall on x = line · cell_size
    vertical: Vec<bool>,
    // horizontal[line * cols + col]: wall on y = line · cell_size
    horizontal: Vec<bool>,
}

impl Maze {
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn wall_height(&self) -> f64 {
        self.wall_height
    }

    pub fn start(&self) -> CellIndex {
        self.start
    }

    pub fn start_heading(&self) -> Direction {
        self.heading
    }

    /// The open exit edge, in canonical (boundary) form.
    pub fn exit(&self) -> WallEdge {
        self.exit
    }

    pub fn exit_cell(&self) -> CellIndex {
        self.exit.cell
    }

    pub fn cell_count(&self) -> usize {
        self.cols * self.rows
    }

    pub fn width(&self) -> f64 {
        self.cols as f64 * self.cell_size
    }

    pub fn height(&self) -> f64 {
        self.rows as f64 * self.cell_size
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        cell.col < self.cols && cell.row < self.rows
    }

    /// Row-major dense index of a cell.
    pub fn cell_id(&self, cell: CellIndex) -> usize {
        cell.row * self.cols + cell.col
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.rows).flat_map(move |row| (0..self.cols).map(move |col| CellIndex::new(col, row)))
    }

    pub fn cell_center(&self, cell: CellIndex) -> (f64, f64) {
        (
            (cell.col as f64 + 0.5) * self.cell_size,
            (cell.row as f64 + 0.5) * self.cell_size,
        )
    }

    /// Cell whose closed square contains the point, if any. Points on a
    /// shared boundary map to the east/north cell.
    pub fn cell_at(&self, x: f64, y: f64) -> Option<CellIndex> {
        if !(0.0..=self.width()).contains(&x) || !(0.0..=self.height()).contains(&y) {
            return None;
        }
        let col = ((x / self.cell_size).floor() as usize).min(self.cols - 1);
        let row = ((y / self.cell_size).floor() as usize).min(self.rows - 1);
        Some(CellIndex::new(col, row))
    }

    /// Neighbor across `side`, if it lies inside the grid (walls ignored).
    pub fn adjacent(&self, cell: CellIndex, side: Direction) -> Option<CellIndex> {
        let (dc, dr) = side.delta();
        let col = cell.col as i64 + dc;
        let row = cell.row as i64 + dr;
        if col < 0 || row < 0 || col >= self.cols as i64 || row >= self.rows as i64 {
            None
        } else {
            Some(CellIndex::new(col as usize, row as usize))
        }
    }

    /// Whether `side` of `cell` is walled. The exit edge is not.
    pub fn has_wall(&self, cell: CellIndex, side: Direction) -> bool {
        match side {
            Direction::West => self.vertical_wall(cell.col, cell.row),
            Direction::East => self.vertical_wall(cell.col + 1, cell.row),
            Direction::South => self.horizontal_wall(cell.col, cell.row),
            Direction::North => self.horizontal_wall(cell.col, cell.row + 1),
        }
    }

    pub fn is_exit(&self, cell: CellIndex, side: Direction) -> bool {
        self.exit == WallEdge::new(cell, side)
    }

    /// Corridor neighbor across `side`: inside the grid and not walled.
    pub fn open_neighbor(&self, cell: CellIndex, side: Direction) -> Option<CellIndex> {
        if self.has_wall(cell, side) {
            None
        } else {
            self.adjacent(cell, side)
        }
    }

    /// Number of open sides of a cell, counting the exit edge.
    pub fn corridor_degree(&self, cell: CellIndex) -> usize {
        Direction::ALL
            .iter()
            .filter(|&&d| !self.has_wall(cell, d))
            .count()
    }

    /// Wall on the vertical grid line `x = line · cell_size` in `row`.
    pub fn vertical_wall(&self, line: usize, row: usize) -> bool {
        self.vertical[row * (self.cols + 1) + line]
    }

    /// Wall on the horizontal grid line `y = line · cell_size` in `col`.
    pub fn horizontal_wall(&self, col: usize, line: usize) -> bool {
        self.horizontal[line * self.cols + col]
    }

    /// All walled edges in canonical form, ordered by cell then side.
    pub fn walls(&self) -> Vec<WallEdge> {
        let mut out = Vec::new();
        for cell in self.cells() {
            for side in Direction::ALL {
                let edge = WallEdge::new(cell, side);
                if edge.canonical(self.cols, self.rows) == edge && self.has_wall(cell, side) {
                    out.push(edge);
                }
            }
        }
        out.sort();
        out
    }

    /// Breadth-first reachability from the start cell over open edges.
    pub fn reachable_cells(&self) -> Vec<bool> {
        let mut seen = vec![false; self.cell_count()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.cell_id(self.start)] = true;
        while let Some(cell) = queue.pop_front() {
            for side in Direction::ALL {
                if let Some(next) = self.open_neighbor(cell, side) {
                    let id = self.cell_id(next);
                    if !seen[id] {
                        seen[id] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        seen
    }

    pub fn exit_reachable(&self) -> bool {
        self.reachable_cells()[self.cell_id(self.exit.cell)]
    }
}

/// Incremental constructor. Starts fully walled; corridors are carved
/// with [`MazeBuilder::open`].
#[derive(Debug, Clone)]
pub struct MazeBuilder {
    cols: usize,
    rows: usize,
    cell_size: f64,
    wall_height: f64,
    start: CellIndex,
    heading: Direction,
    exit: Option<WallEdge>,
    opened: Vec<WallEdge>,
}

impl MazeBuilder {
    pub fn new(cols: usize, rows: usize) -> Self {
        Self {
            cols,
            rows,
            cell_size: DEFAULT_CELL_SIZE,
            wall_height: DEFAULT_WALL_HEIGHT,
            start: CellIndex::new(0, 0),
            heading: Direction::East,
            exit: None,
            opened: Vec::new(),
        }
    }

    pub fn cell_size(mut self, cell_size: f64) -> Self {
        self.cell_size = cell_size;
        self
    }

    pub fn wall_height(mut self, wall_height: f64) -> Self {
        self.wall_height = wall_height;
        self
    }

    pub fn start(mut self, cell: CellIndex, heading: Direction) -> Self {
        self.start = cell;
        self.heading = heading;
        self
    }

    pub fn exit(mut self, cell: CellIndex, side: Direction) -> Self {
        self.exit = Some(WallEdge::new(cell, side));
        self
    }

    /// Remove the wall on `side` of `cell`.
    pub fn open(mut self, cell: CellIndex, side: Direction) -> Self {
        self.opened.push(WallEdge::new(cell, side));
        self
    }

    pub fn open_mut(&mut self, cell: CellIndex, side: Direction) -> &mut Self {
        self.opened.push(WallEdge::new(cell, side));
        self
    }

    /// Check structural invariants and produce the maze. Reachability is
    /// not checked here; see [`Maze::exit_reachable`].
    pub fn build(self) -> Result<Maze, MazeError> {
        let (cols, rows) = (self.cols, self.rows);
        if cols == 0 || rows == 0 {
            return Err(MazeError::InvalidDimensions { cols, rows });
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return Err(MazeError::NonPositiveCellSize(self.cell_size));
        }
        let in_bounds = |cell: CellIndex| {
            if cell.col < cols && cell.row < rows {
                Ok(())
            } else {
                Err(MazeError::CellOutOfBounds { cell, cols, rows })
            }
        };
        in_bounds(self.start)?;
        let exit = self.exit.ok_or(MazeError::MissingExit)?;
        in_bounds(exit.cell)?;
        if !exit.is_boundary(cols, rows) {
            return Err(MazeError::ExitNotOnBoundary {
                cell: exit.cell,
                side: exit.side,
            });
        }

        let mut maze = Maze {
            cols,
            rows,
            cell_size: self.cell_size,
            wall_height: self.wall_height,
            start: self.start,
            heading: self.heading,
            exit,
            vertical: vec![true; (cols + 1) * rows],
            horizontal: vec![true; cols * (rows + 1)],
        };
        for edge in self.opened {
            in_bounds(edge.cell)?;
            if edge.is_boundary(cols, rows) && edge != exit {
                return Err(MazeError::BoundaryOpen {
                    cell: edge.cell,
                    side: edge.side,
                });
            }
            maze.set_wall(edge.cell, edge.side, false);
        }
        maze.set_wall(exit.cell, exit.side, false);
        Ok(maze)
    }
}

impl Maze {
    fn set_wall(&mut self, cell: CellIndex, side: Direction, walled: bool) {
        let cols = self.cols;
        let slot = match side {
            Direction::West => &mut self.vertical[cell.row * (cols + 1) + cell.col],
            Direction::East => &mut self.vertical[cell.row * (cols + 1) + cell.col + 1],
            Direction::South => &mut self.horizontal[cell.row * cols + cell.col],
            Direction::North => &mut self.horizontal[(cell.row + 1) * cols + cell.col],
        };
        *slot = walled;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cell() -> Maze {
        MazeBuilder::new(2, 1)
            .start(CellIndex::new(0, 0), Direction::East)
            .open(CellIndex::new(0, 0), Direction::East)
            .exit(CellIndex::new(1, 0), Direction::East)
            .build()
            .unwrap()
    }

    #[test]
    fn direction_rotations() {
        for d in Direction::ALL {
            assert_eq!(d.left().right(), d);
            assert_eq!(d.opposite().opposite(), d);
            assert_ne!(d.left(), d.right());
        }
        assert_eq!(Direction::East.right(), Direction::South);
        assert_eq!(Direction::North.right(), Direction::East);
    }

    #[test]
    fn canonical_edges_are_unique() {
        let a = WallEdge::new(CellIndex::new(1, 0), Direction::West).canonical(2, 1);
        let b = WallEdge::new(CellIndex::new(0, 0), Direction::East).canonical(2, 1);
        assert_eq!(a, b);
        let south = WallEdge::new(CellIndex::new(0, 0), Direction::South).canonical(2, 1);
        assert_eq!(south.side, Direction::South);
    }

    #[test]
    fn two_cell_maze_walls() {
        let m = two_cell();
        assert!(!m.has_wall(CellIndex::new(0, 0), Direction::East));
        assert!(!m.has_wall(CellIndex::new(1, 0), Direction::West));
        assert!(!m.has_wall(CellIndex::new(1, 0), Direction::East));
        assert!(m.has_wall(CellIndex::new(0, 0), Direction::West));
        // 2 + 2 horizontal boundary edges and the west boundary
        assert_eq!(m.walls().len(), 5);
        assert!(m.exit_reachable());
        assert_eq!(m.corridor_degree(CellIndex::new(1, 0)), 2);
    }

    #[test]
    fn builder_rejects_bad_structure() {
        assert!(matches!(
            MazeBuilder::new(0, 3).build(),
            Err(MazeError::InvalidDimensions { .. })
        ));
        assert!(matches!(
            MazeBuilder::new(2, 2)
                .exit(CellIndex::new(0, 0), Direction::East)
                .build(),
            Err(MazeError::ExitNotOnBoundary { .. })
        ));
        assert!(matches!(
            MazeBuilder::new(2, 2)
                .exit(CellIndex::new(1, 0), Direction::East)
                .open(CellIndex::new(0, 0), Direction::West)
                .build(),
            Err(MazeError::BoundaryOpen { .. })
        ));
        assert!(matches!(
            MazeBuilder::new(2, 2)
                .cell_size(0.0)
                .exit(CellIndex::new(1, 0), Direction::East)
                .build(),
            Err(MazeError::NonPositiveCellSize(_))
        ));
        assert!(matches!(
            MazeBuilder::new(2, 2)
                .start(CellIndex::new(5, 0), Direction::East)
                .exit(CellIndex::new(1, 0), Direction::East)
                .build(),
            Err(MazeError::CellOutOfBounds { .. })
        ));
    }

    #[test]
    fn cell_lookup_and_centers() {
        let m = two_cell();
        assert_eq!(m.cell_at(15.0, 15.0), Some(CellIndex::new(0, 0)));
        assert_eq!(m.cell_at(30.0, 15.0), Some(CellIndex::new(1, 0)));
        assert_eq!(m.cell_at(60.0, 30.0), Some(CellIndex::new(1, 0)));
        assert_eq!(m.cell_at(60.5, 15.0), None);
        assert_eq!(m.cell_center(CellIndex::new(1, 0)), (45.0, 15.0));
    }
}
