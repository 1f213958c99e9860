//! Text maze format.
//!
//! ```text
//! maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E
//! #####
//! #S .E
//! #####
//! ```
//!
//! The header is followed by a `(2·cols+1) × (2·rows+1)` character grid
//! with the northmost row first. Odd/odd positions are cells (`.` or `S`),
//! other odd positions are wall slots (`#` walled, ` ` open, `E` exit) and
//! even/even positions are posts (`#`, `+` or ` `, ignored on input).
//! A trailing newline is required.

use std::fmt;

use thiserror::Error;

use super::{CellIndex, Direction, Maze, MazeBuilder, MazeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("missing start")]
    MissingStart,
    #[error("multiple starts")]
    MultipleStarts,
    #[error("missing exit")]
    MissingExit,
    #[error("multiple exits")]
    MultipleExits,
    #[error("non-rectangular grid: {0}")]
    NonRectangular(String),
    #[error("missing trailing newline")]
    MissingTrailingNewline,
    #[error(transparent)]
    Invalid(#[from] MazeError),
}

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

struct Header {
    cols: usize,
    rows: usize,
    cell: f64,
    start: CellIndex,
    heading: Direction,
}

fn parse_header(line: &str) -> Result<Header, ParseError> {
    let mut tokens = Vec::new();
    let mut offset = 0;
    for token in line.split(' ') {
        if token.is_empty() {
            return Err(syntax(1, offset + 1, "expected single spaces between header fields"));
        }
        tokens.push((offset + 1, token));
        offset += token.chars().count() + 1;
    }
    match tokens.as_slice() {
        [(_, "maze"), (_, "v1"), ..] => {}
        [(_, "maze"), (col, _), ..] => return Err(syntax(1, *col, "unsupported format version")),
        _ => return Err(syntax(1, 1, "header must start with `maze v1`")),
    }

    let mut cols = None;
    let mut rows = None;
    let mut cell = None;
    let mut start = None;
    let mut heading = None;
    for &(col, token) in &tokens[2..] {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| syntax(1, col, format!("expected key=value, found `{token}`")))?;
        let bad = |what: &str| syntax(1, col, format!("invalid {what} `{value}`"));
        let duplicate = || syntax(1, col, format!("duplicate header field `{key}`"));
        match key {
            "cols" => {
                let v = value.parse::<usize>().map_err(|_| bad("column count"))?;
                if cols.replace(v).is_some() {
                    return Err(duplicate());
                }
            }
            "rows" => {
                let v = value.parse::<usize>().map_err(|_| bad("row count"))?;
                if rows.replace(v).is_some() {
                    return Err(duplicate());
                }
            }
            "cell" => {
                let v = value.parse::<f64>().map_err(|_| bad("cell size"))?;
                if cell.replace(v).is_some() {
                    return Err(duplicate());
                }
            }
            "start" => {
                let (c, r) = value.split_once(',').ok_or_else(|| bad("start"))?;
                let c = c.parse::<usize>().map_err(|_| bad("start"))?;
                let r = r.parse::<usize>().map_err(|_| bad("start"))?;
                if start.replace(CellIndex::new(c, r)).is_some() {
                    return Err(duplicate());
                }
            }
            "heading" => {
                let mut chars = value.chars();
                let d = match (chars.next(), chars.next()) {
                    (Some(c), None) => Direction::from_letter(c),
                    _ => None,
                }
                .ok_or_else(|| bad("heading"))?;
                if heading.replace(d).is_some() {
                    return Err(duplicate());
                }
            }
            _ => return Err(syntax(1, col, format!("unknown header field `{key}`"))),
        }
    }
    let missing = |name: &str| syntax(1, offset.max(1), format!("header is missing `{name}`"));
    let header = Header {
        cols: cols.ok_or_else(|| missing("cols"))?,
        rows: rows.ok_or_else(|| missing("rows"))?,
        cell: cell.ok_or_else(|| missing("cell"))?,
        start: start.ok_or_else(|| missing("start"))?,
        heading: heading.ok_or_else(|| missing("heading"))?,
    };
    if header.cols == 0 || header.rows == 0 {
        return Err(err(
            1,
            1,
            MazeError::InvalidDimensions {
                cols: header.cols,
                rows: header.rows,
            }
            .into(),
        ));
    }
    Ok(header)
}

/// Parse maze text. The result satisfies every [`Maze`] invariant,
/// including reachability of the exit from the start.
pub fn parse_maze(text: &str) -> Result<Maze, ParseError> {
    if text.is_empty() {
        return Err(syntax(1, 1, "empty input"));
    }
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() != Some(&"") {
        let line = lines.len();
        let column = lines[line - 1].chars().count() + 1;
        return Err(err(line, column, ParseErrorKind::MissingTrailingNewline));
    }
    lines.pop();

    let header = parse_header(lines[0])?;
    let width = 2 * header.cols + 1;
    let height = 2 * header.rows + 1;
    let grid_lines = &lines[1..];
    if grid_lines.len() != height {
        let line = 1 + grid_lines.len().min(height) + 1;
        return Err(err(
            line.min(lines.len().max(2)),
            1,
            ParseErrorKind::NonRectangular(format!(
                "expected {height} grid lines, found {}",
                grid_lines.len()
            )),
        ));
    }

    let mut grid: Vec<Vec<char>> = Vec::with_capacity(height);
    for (i, line) in grid_lines.iter().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != width {
            return Err(err(
                i + 2,
                chars.len().min(width) + 1,
                ParseErrorKind::NonRectangular(format!(
                    "expected {width} characters, found {}",
                    chars.len()
                )),
            ));
        }
        grid.push(chars);
    }

    // Source position of grid coordinate (gx, gy), gy counted from the south.
    let pos = |gx: usize, gy: usize| (height - gy + 1, gx + 1);

    let mut builder = MazeBuilder::new(header.cols, header.rows)
        .cell_size(header.cell)
        .start(header.start, header.heading);
    let mut start_seen: Option<CellIndex> = None;
    let mut exit_seen = false;

    for gy in 0..height {
        for gx in 0..width {
            let ch = grid[height - 1 - gy][gx];
            let (line, column) = pos(gx, gy);
            match (gx % 2, gy % 2) {
                (1, 1) => {
                    let cell = CellIndex::new(gx / 2, gy / 2);
                    match ch {
                        '.' => {}
                        'S' => {
                            if start_seen.replace(cell).is_some() {
                                return Err(err(line, column, ParseErrorKind::MultipleStarts));
                            }
                        }
                        _ => return Err(syntax(line, column, format!("unexpected `{ch}` in cell"))),
                    }
                }
                (0, 0) => {
                    if !matches!(ch, '#' | '+' | ' ') {
                        return Err(syntax(line, column, format!("unexpected `{ch}` at post")));
                    }
                }
                _ => {
                    // Wall slot: describe it as a side of the cell to its west/south,
                    // or of the first cell on the west/south boundary.
                    let (cell, side) = if gx % 2 == 0 {
                        let row = gy / 2;
                        if gx == 0 {
                            (CellIndex::new(0, row), Direction::West)
                        } else {
                            (CellIndex::new(gx / 2 - 1, row), Direction::East)
                        }
                    } else {
                        let col = gx / 2;
                        if gy == 0 {
                            (CellIndex::new(col, 0), Direction::South)
                        } else {
                            (CellIndex::new(col, gy / 2 - 1), Direction::North)
                        }
                    };
                    let boundary = gx == 0 || gy == 0 || gx == width - 1 || gy == height - 1;
                    match ch {
                        '#' => {}
                        ' ' if boundary => {
                            return Err(syntax(line, column, "open boundary slot must be marked `E`"))
                        }
                        ' ' => {
                            builder.open_mut(cell, side);
                        }
                        'E' if !boundary => {
                            return Err(syntax(line, column, "exit marker on an interior wall slot"))
                        }
                        'E' => {
                            if exit_seen {
                                return Err(err(line, column, ParseErrorKind::MultipleExits));
                            }
                            exit_seen = true;
                            builder = builder.exit(cell, side);
                        }
                        _ => {
                            return Err(syntax(line, column, format!("unexpected `{ch}` in wall slot")))
                        }
                    }
                }
            }
        }
    }

    match start_seen {
        None => return Err(err(2, 1, ParseErrorKind::MissingStart)),
        Some(cell) if cell != header.start => {
            let (line, column) = pos(2 * cell.col + 1, 2 * cell.row + 1);
            return Err(syntax(
                line,
                column,
                format!("start marker at {cell} does not match header start {}", header.start),
            ));
        }
        Some(_) => {}
    }
    if !exit_seen {
        return Err(err(2, 1, ParseErrorKind::MissingExit));
    }
    let maze = builder.build().map_err(|e| err(1, 1, e.into()))?;
    if !maze.exit_reachable() {
        return Err(err(1, 1, MazeError::ExitUnreachable.into()));
    }
    Ok(maze)
}

fn format_number(v: f64) -> String {
    format!("{v}")
}

/// Canonical text form of a maze.
///
/// # Panics
///
/// If the exit is unreachable from the start; such a maze cannot be
/// produced by [`parse_maze`].
pub fn serialize_maze(maze: &Maze) -> String {
    assert!(
        maze.exit_reachable(),
        "serialize_maze precondition violated: exit unreachable from start"
    );
    let (cols, rows) = (maze.cols(), maze.rows());
    let width = 2 * cols + 1;
    let height = 2 * rows + 1;
    let start = maze.start();

    let slot = |gx: usize, gy: usize| -> Option<char> {
        // None for posts and cells
        match (gx % 2, gy % 2) {
            (0, 1) => {
                let (line, row) = (gx / 2, gy / 2);
                let exit = maze.exit();
                let is_exit = match exit.side {
                    Direction::West => line == 0 && exit.cell.row == row,
                    Direction::East => line == cols && exit.cell.row == row,
                    _ => false,
                };
                Some(if is_exit {
                    'E'
                } else if maze.vertical_wall(line, row) {
                    '#'
                } else {
                    ' '
                })
            }
            (1, 0) => {
                let (col, line) = (gx / 2, gy / 2);
                let exit = maze.exit();
                let is_exit = match exit.side {
                    Direction::South => line == 0 && exit.cell.col == col,
                    Direction::North => line == rows && exit.cell.col == col,
                    _ => false,
                };
                Some(if is_exit {
                    'E'
                } else if maze.horizontal_wall(col, line) {
                    '#'
                } else {
                    ' '
                })
            }
            _ => None,
        }
    };

    let mut out = format!(
        "maze v1 cols={} rows={} cell={} start={},{} heading={}\n",
        cols,
        rows,
        format_number(maze.cell_size()),
        start.col,
        start.row,
        maze.start_heading()
    );
    for gy in (0..height).rev() {
        for gx in 0..width {
            let ch = match (gx % 2, gy % 2) {
                (1, 1) => {
                    if CellIndex::new(gx / 2, gy / 2) == start {
                        'S'
                    } else {
                        '.'
                    }
                }
                (0, 0) => {
                    let mut touching = false;
                    if gx > 0 {
                        touching |= slot(gx - 1, gy) == Some('#');
                    }
                    if gx + 1 < width {
                        touching |= slot(gx + 1, gy) == Some('#');
                    }
                    if gy > 0 {
                        touching |= slot(gx, gy - 1) == Some('#');
                    }
                    if gy + 1 < height {
                        touching |= slot(gx, gy + 1) == Some('#');
                    }
                    if touching {
                        '#'
                    } else {
                        ' '
                    }
                }
                _ => slot(gx, gy).unwrap_or('#'),
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::REFERENCE_MAZE;

    const TWO_CELL: &str = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#S .E\n#####\n";

    #[test]
    fn smallest_maze_parses() {
        let m = parse_maze(TWO_CELL).unwrap();
        assert_eq!((m.cols(), m.rows()), (2, 1));
        assert!(!m.has_wall(CellIndex::new(0, 0), Direction::East));
        assert_eq!(m.exit().cell, CellIndex::new(1, 0));
        assert_eq!(m.exit().side, Direction::East);
        assert_eq!(serialize_maze(&m), TWO_CELL);
    }

    #[test]
    fn reference_maze_is_a_fixed_point() {
        let m = parse_maze(REFERENCE_MAZE).unwrap();
        assert_eq!((m.cols(), m.rows(), m.cell_size()), (8, 4, 30.0));
        assert_eq!(m.wall_height(), 15.0);
        assert_eq!(serialize_maze(&m), REFERENCE_MAZE);
    }

    #[test]
    fn two_exits_rejected() {
        let text = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\nES .E\n#####\n";
        let e = parse_maze(text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MultipleExits);
        assert_eq!((e.line, e.column), (3, 5));
        assert!(e.to_string().contains("multiple exits"));
    }

    #[test]
    fn missing_start_and_exit() {
        let no_start = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#. .E\n#####\n";
        assert_eq!(parse_maze(no_start).unwrap_err().kind, ParseErrorKind::MissingStart);
        let no_exit = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#S .#\n#####\n";
        assert_eq!(parse_maze(no_exit).unwrap_err().kind, ParseErrorKind::MissingExit);
    }

    #[test]
    fn non_rectangular_grid() {
        let short = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#S .E\n####\n";
        let e = parse_maze(short).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::NonRectangular(_)));
        assert_eq!(e.line, 4);
        let missing_line = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#S .E\n";
        assert!(matches!(
            parse_maze(missing_line).unwrap_err().kind,
            ParseErrorKind::NonRectangular(_)
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let bad_char = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#S xE\n#####\n";
        let e = parse_maze(bad_char).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (3, 4));

        let bad_header = "maze v1 cols=2 rows=one cell=30 start=0,0 heading=E\n#####\n#S .E\n#####\n";
        let e = parse_maze(bad_header).unwrap_err();
        assert_eq!((e.line, e.column), (1, 16));

        assert_eq!(
            parse_maze(TWO_CELL.trim_end()).unwrap_err().kind,
            ParseErrorKind::MissingTrailingNewline
        );
        assert!(parse_maze("garbage\n").is_err());
        assert!(parse_maze("").is_err());
    }

    #[test]
    fn start_must_match_header() {
        let text = "maze v1 cols=2 rows=1 cell=30 start=1,0 heading=E\n#####\n#S .E\n#####\n";
        assert!(matches!(parse_maze(text).unwrap_err().kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn unreachable_exit_rejected() {
        let text = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n#S#.E\n#####\n";
        assert_eq!(
            parse_maze(text).unwrap_err().kind,
            ParseErrorKind::Invalid(MazeError::ExitUnreachable)
        );
    }

    #[test]
    fn open_boundary_without_exit_marker() {
        let text = "maze v1 cols=2 rows=1 cell=30 start=0,0 heading=E\n#####\n S .E\n#####\n";
        assert!(matches!(parse_maze(text).unwrap_err().kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    #[should_panic(expected = "precondition")]
    fn serialize_rejects_isolated_cells() {
        let m = MazeBuilder::new(2, 1)
            .exit(CellIndex::new(1, 0), Direction::East)
            .build()
            .unwrap();
        serialize_maze(&m);
    }

    #[test]
    fn posts_are_canonicalized() {
        let text = "maze v1 cols=2 rows=2 cell=30 start=0,0 heading=E\n+#+#+\n#. .#\n+ + +\n#S .E\n+#+#+\n";
        let m = parse_maze(text).unwrap();
        let canon = serialize_maze(&m);
        assert_eq!(
            canon,
            "maze v1 cols=2 rows=2 cell=30 start=0,0 heading=E\n#####\n#. .#\n#   #\n#S .E\n#####\n"
        );
        assert_eq!(parse_maze(&canon).unwrap(), m);
    }
}
