//! SVG and ASCII pictures of a maze and a recorded trace.

use std::fmt::Write as _;

use thiserror::Error;

use crate::harness::TraceRow;
use crate::maze::{serialize_maze, CellIndex, Direction, Maze};
use crate::robot::{beyond_exit, Channel, Pose, RobotSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    pub format: RenderFormat,
    /// SVG pixels per cm.
    pub scale: f64,
    pub show_path: bool,
    pub show_rays: bool,
    pub show_phases: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            format: RenderFormat::Svg,
            scale: 2.0,
            show_path: true,
            show_rays: false,
            show_phases: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("trace row {row} at ({x:.2}, {y:.2}) lies outside the maze")]
    OutOfBounds { row: usize, x: f64, y: f64 },
    #[error("trace row {row} passes from {from} to {to} through a wall")]
    ThroughWall { row: usize, from: CellIndex, to: CellIndex },
}

fn trace_cell(maze: &Maze, x: f64, y: f64) -> Option<CellIndex> {
    if beyond_exit(maze, (x, y)) {
        return Some(maze.exit_cell());
    }
    maze.cell_at(x, y)
}

/// Reject traces that could not have been recorded in `maze`.
pub fn check_trace(maze: &Maze, trace: &[TraceRow]) -> Result<(), RenderError> {
    let mut prev: Option<CellIndex> = None;
    for (i, r) in trace.iter().enumerate() {
        let cell = trace_cell(maze, r.x, r.y).ok_or(RenderError::OutOfBounds { row: i + 1, x: r.x, y: r.y })?;
        if let Some(p) = prev {
            let ok = p == cell
                || Direction::ALL
                    .into_iter()
                    .any(|d| maze.open_neighbor(p, d) == Some(cell));
            if !ok {
                return Err(RenderError::ThroughWall {
                    row: i + 1,
                    from: p,
                    to: cell,
                });
            }
        }
        prev = Some(cell);
    }
    Ok(())
}

/// Trajectory with collinear interior points removed. Back-up points,
/// where the motion reverses along the same line, are kept.
pub fn trajectory(trace: &[TraceRow]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for r in trace {
        let p = (r.x, r.y);
        if pts.last().is_some_and(|&q| (q.0 - p.0).hypot(q.1 - p.1) < 1e-9) {
            continue;
        }
        if pts.len() >= 2 {
            let a = pts[pts.len() - 2];
            let b = pts[pts.len() - 1];
            let (ux, uy) = (b.0 - a.0, b.1 - a.1);
            let (vx, vy) = (p.0 - b.0, p.1 - b.1);
            let cross = ux * vy - uy * vx;
            let dot = ux * vx + uy * vy;
            if cross.abs() <= 1e-6 * ux.hypot(uy) * vx.hypot(vy) && dot > 0.0 {
                pts.pop();
            }
        }
        pts.push(p);
    }
    pts
}

/// Interior vertices of [`trajectory`] where the direction turns rather
/// than reverses.
pub fn corner_count(points: &[(f64, f64)]) -> usize {
    points
        .windows(3)
        .filter(|w| {
            let (ux, uy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let (vx, vy) = (w[2].0 - w[1].0, w[2].1 - w[1].1);
            (ux * vy - uy * vx).abs() > 1e-6 * ux.hypot(uy) * vx.hypot(vy)
        })
        .count()
}

fn has_event(row: &TraceRow, prefix: &str) -> bool {
    row.event
        .as_deref()
        .is_some_and(|e| e.split(';').any(|part| part.starts_with(prefix)))
}

pub fn render(maze: &Maze, trace: &[TraceRow], spec: &RobotSpec, style: &RenderStyle) -> Result<String, RenderError> {
    check_trace(maze, trace)?;
    match style.format {
        RenderFormat::Svg => render_svg(maze, trace, spec, style),
        RenderFormat::Ascii => Ok(render_ascii(maze, trace)),
    }
}

fn phase_color(phase: &str) -> &'static str {
    match phase {
        "DriveForward" => "#2a7ab0",
        "Reversing" => "#c0392b",
        "Deciding" => "#8e44ad",
        "Turning" => "#e67e22",
        "Exited" => "#27ae60",
        _ => "#555555",
    }
}

pub fn render_svg(maze: &Maze, trace: &[TraceRow], spec: &RobotSpec, style: &RenderStyle) -> Result<String, RenderError> {
    if !(style.scale > 0.0 && style.scale.is_finite()) {
        return Err(RenderError::BadScale(style.scale));
    }
    let s = style.scale;
    let margin = 10.0;
    let w = maze.width() * s + 2.0 * margin;
    let h = maze.height() * s + 2.0 * margin;
    let px = |x: f64| margin + x * s;
    let py = |y: f64| margin + (maze.height() - y) * s;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    let cs = maze.cell_size();
    let _ = writeln!(out, r##"<g stroke="#222222" stroke-width="{:.2}" stroke-linecap="square">"##, 1.5 * s);
    for edge in maze.walls() {
        let c = edge.cell;
        let (x0, y0) = (c.col as f64 * cs, c.row as f64 * cs);
        let (a, b) = match edge.side {
            Direction::East => ((x0 + cs, y0), (x0 + cs, y0 + cs)),
            Direction::West => ((x0, y0), (x0, y0 + cs)),
            Direction::North => ((x0, y0 + cs), (x0 + cs, y0 + cs)),
            Direction::South => ((x0, y0), (x0 + cs, y0)),
        };
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            px(a.0),
            py(a.1),
            px(b.0),
            py(b.1)
        );
    }
    let _ = writeln!(out, "</g>");

    let (sx, sy) = maze.cell_center(maze.start());
    let _ = writeln!(
        out,
        r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#27ae60" stroke-width="1"/>"##,
        px(sx),
        py(sy),
        spec.body_radius * s
    );

    if style.show_path && !trace.is_empty() {
        let pts: Vec<String> = trajectory(trace)
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline fill="none" stroke="#2a7ab0" stroke-width="{:.2}" points="{}"/>"##,
            0.8 * s,
            pts.join(" ")
        );
    }

    if style.show_rays {
        let _ = writeln!(out, r##"<g stroke="#e74c3c" stroke-width="0.6" stroke-dasharray="3,2">"##);
        for r in trace.iter().filter(|r| r.phase == "Turning" && has_event(r, "turn:")) {
            let pose = Pose::new(r.x, r.y, r.theta);
            for ch in Channel::ALL {
                let m = spec.mount(ch);
                let (ox, oy) = pose.body_to_world(m.forward, m.left);
                let len = match ch {
                    Channel::Front => r.front,
                    Channel::Left => r.left,
                    Channel::Right => r.right,
                };
                let (dy, dx) = (pose.theta + m.angle).sin_cos();
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                    px(ox),
                    py(oy),
                    px(ox + dx * len),
                    py(oy + dy * len)
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    if style.show_phases {
        let _ = writeln!(out, "<g>");
        let mut last = "";
        for r in trace {
            if r.phase != last {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{}"><title>{:.2}s {}</title></circle>"#,
                    px(r.x),
                    py(r.y),
                    phase_color(&r.phase),
                    r.t,
                    r.phase
                );
                last = &r.phase;
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let turns: Vec<&TraceRow> = trace.iter().filter(|r| has_event(r, "turn:")).collect();
    if !turns.is_empty() {
        let _ = writeln!(out, r##"<g font-family="monospace" font-size="{:.2}">"##, 5.0 * s);
        for (i, r) in turns.iter().enumerate() {
            let _ = writeln!(
                out,
                r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#e67e22"/><text x="{:.2}" y="{:.2}">{}</text>"##,
                px(r.x),
                py(r.y),
                1.5 * s,
                px(r.x) + 2.5 * s,
                py(r.y) - 2.5 * s,
                i + 1
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Maze grid in the file layout, visited cells and the openings between
/// consecutive ones marked `*`.
pub fn render_ascii(maze: &Maze, trace: &[TraceRow]) -> String {
    let text = serialize_maze(maze);
    // grid[gy][gx] with gy = 0 the south edge.
    let mut grid: Vec<Vec<char>> = text.lines().skip(1).map(|l| l.chars().collect()).collect();
    grid.reverse();
    let mut visited: Vec<CellIndex> = Vec::new();
    for r in trace {
        if let Some(c) = maze.cell_at(r.x, r.y) {
            if visited.last() != Some(&c) {
                visited.push(c);
            }
        }
    }
    for c in &visited {
        grid[2 * c.row + 1][2 * c.col + 1] = '*';
    }
    for pair in visited.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        grid[a.row + b.row + 1][a.col + b.col + 1] = '*';
    }
    let s = maze.start();
    grid[2 * s.row + 1][2 * s.col + 1] = 'S';

    let mut out = String::new();
    for row in grid.iter().rev() {
        out.extend(row.iter());
        out.push('\n');
    }
    out
}
