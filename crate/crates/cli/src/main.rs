use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mazebot_core::controller::{ControllerParams, TieBreak};
use mazebot_core::harness::{
    calibrate_speed_with, read_trace_csv, run_batch, run_trial, TrialConfig, DEFAULT_TIMEOUT,
};
use mazebot_core::maze::{generate_intermediate, parse_maze, serialize_maze, validate, Maze};
use mazebot_core::render::{render, RenderFormat, RenderStyle};
use mazebot_core::robot::{NoiseModel, RobotSpec};
use mazebot_core::search::{build_graph, path_length_cm, solve_bfs};

#[derive(Parser)]
#[command(name = "mazebot", version, about = "Simulate a greedy clearance-following maze robot")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check, solve or generate mazes.
    #[command(subcommand)]
    Maze(MazeCommand),
    /// Run simulated trials.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Draw a recorded trace over its maze.
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum MazeCommand {
    /// Report connectivity, path uniqueness and greedy admissibility.
    Validate {
        maze: PathBuf,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Print the shortest start-to-exit cell path.
    Solve {
        maze: PathBuf,
        #[arg(long, value_enum, default_value_t = TextFormat::Json)]
        format: TextFormat,
    },
    /// Generate a single-corridor maze with a given number of corners.
    Generate {
        #[arg(long, default_value_t = 8)]
        cols: usize,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 6)]
        turns: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SimCommand {
    /// One trial; prints a summary line.
    Run {
        maze: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        /// Write the trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write a picture of the run here.
        #[arg(long)]
        render: Option<PathBuf>,
        /// Picture format for --render.
        #[arg(long, value_enum, default_value_t = ImageFormat::Svg)]
        format: ImageFormat,
    },
    /// Many trials with derived seeds; prints a results table.
    Batch {
        maze: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Find the speed at which a noiseless run takes a given time.
    Calibrate {
        maze: PathBuf,
        /// Target elapsed time, s.
        #[arg(long, default_value_t = 37.0)]
        target: f64,
        #[arg(long, default_value_t = 10.0)]
        front_stop: f64,
        #[arg(long = "reverse", default_value_t = 5.0)]
        reverse: f64,
        #[arg(long, value_enum, default_value_t = Side::Right)]
        tie_break: Side,
    },
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gaussian sensor noise, cm.
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
    /// Per-reading misread probability.
    #[arg(long, default_value_t = 0.0)]
    misread_prob: f64,
    /// Turn error standard deviation, degrees.
    #[arg(long, default_value_t = 0.0)]
    turn_sigma: f64,
    /// Linear speed, cm/s.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    speed: f64,
    /// s
    #[arg(long, default_value_t = DEFAULT_TIMEOUT, allow_negative_numbers = true)]
    timeout: f64,
    #[arg(long, value_enum, default_value_t = Side::Right)]
    tie_break: Side,
    /// Front stopping gap, cm.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    front_stop: f64,
    /// Back-up distance, cm.
    #[arg(long = "reverse", default_value_t = 5.0, allow_negative_numbers = true)]
    reverse: f64,
}

#[derive(Args)]
struct RenderArgs {
    trace: PathBuf,
    maze: PathBuf,
    #[arg(long, value_enum, default_value_t = ImageFormat::Svg)]
    format: ImageFormat,
    /// SVG pixels per cm.
    #[arg(long, default_value_t = 2.0)]
    scale: f64,
    /// Leave out the trajectory.
    #[arg(long)]
    no_path: bool,
    /// Draw sensor rays at each decision.
    #[arg(long)]
    rays: bool,
    /// Mark phase changes.
    #[arg(long)]
    phases: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Svg,
    Ascii,
}

impl From<ImageFormat> for RenderFormat {
    fn from(f: ImageFormat) -> Self {
        match f {
            ImageFormat::Svg => RenderFormat::Svg,
            ImageFormat::Ascii => RenderFormat::Ascii,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

impl From<Side> for TieBreak {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => TieBreak::PreferLeft,
            Side::Right => TieBreak::PreferRight,
        }
    }
}

fn load_maze(path: &Path) -> Result<Maze> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_maze(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn params(front_stop: f64, reverse: f64, tie_break: Side) -> ControllerParams {
    ControllerParams {
        front_stop,
        reverse_distance: reverse,
        tie_break: tie_break.into(),
        ..Default::default()
    }
}

fn trial_config(maze: Maze, sim: &SimArgs) -> Result<TrialConfig> {
    let config = TrialConfig {
        maze,
        spec: RobotSpec::default().with_speed(sim.speed),
        params: params(sim.front_stop, sim.reverse, sim.tie_break),
        noise: NoiseModel {
            gaussian_sigma: sim.noise_sigma,
            misread_prob: sim.misread_prob,
            turn_error_sigma: sim.turn_sigma.to_radians(),
        },
        seed: sim.seed,
        timeout: sim.timeout,
    };
    config.check()?;
    Ok(config)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn maze_command(cmd: MazeCommand) -> Result<ExitCode> {
    match cmd {
        MazeCommand::Validate { maze, format } => {
            let m = load_maze(&maze)?;
            let report = validate(&m);
            match format {
                TextFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                TextFormat::Text => {
                    let yes = |b: bool| if b { "yes" } else { "no" };
                    println!("connected: {}", yes(report.connected));
                    println!("unique path: {}", yes(report.unique_path));
                    println!("greedy admissible: {}", yes(report.greedy_admissible));
                    for v in &report.violations {
                        println!("violation: {v}");
                    }
                }
            }
            Ok(if report.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        MazeCommand::Solve { maze, format } => {
            let m = load_maze(&maze)?;
            let path = solve_bfs(&build_graph(&m)?);
            match format {
                TextFormat::Json => println!("{}", path.to_json()),
                TextFormat::Text => {
                    let cells: Vec<String> = path.cells().iter().map(ToString::to_string).collect();
                    println!("{}", cells.join(" "));
                    println!(
                        "moves={} corners={} length={:.1}cm",
                        path.moves(),
                        path.corners(),
                        path_length_cm(&path, m.cell_size())
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        MazeCommand::Generate {
            cols,
            rows,
            turns,
            seed,
            output,
        } => {
            let m = generate_intermediate(cols, rows, turns, seed)?;
            write_out(output.as_deref(), &serialize_maze(&m))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sim_command(cmd: SimCommand) -> Result<ExitCode> {
    match cmd {
        SimCommand::Run {
            maze,
            sim,
            trace,
            render: picture,
            format,
        } => {
            let config = trial_config(load_maze(&maze)?, &sim)?;
            let record = run_trial(&config)?;
            if let Some(p) = &trace {
                fs::write(p, record.trace_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            if let Some(p) = &picture {
                let style = RenderStyle {
                    format: format.into(),
                    ..Default::default()
                };
                let text = render(&config.maze, &record.trace, &config.spec, &style)?;
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            }
            println!("{}", record.summary_line());
            Ok(if record.outcome.is_success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        SimCommand::Batch {
            maze,
            sim,
            trials,
            jobs,
            format,
        } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let config = trial_config(load_maze(&maze)?, &sim)?;
            let report = run_batch(&config, trials, jobs)?;
            match format {
                TextFormat::Text => print!("{}", report.to_text()),
                TextFormat::Json => println!("{}", report.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        SimCommand::Calibrate {
            maze,
            target,
            front_stop,
            reverse,
            tie_break,
        } => {
            let mut config = TrialConfig::new(load_maze(&maze)?);
            config.params = params(front_stop, reverse, tie_break);
            config.params.check()?;
            let speed = calibrate_speed_with(&config, target)?;
            println!("speed={speed} target={target}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render_command(args: RenderArgs) -> Result<ExitCode> {
    let maze = load_maze(&args.maze)?;
    let text = fs::read_to_string(&args.trace).with_context(|| format!("reading {}", args.trace.display()))?;
    let trace = read_trace_csv(&text)?;
    let style = RenderStyle {
        format: args.format.into(),
        scale: args.scale,
        show_path: !args.no_path,
        show_rays: args.rays,
        show_phases: args.phases,
    };
    let out = render(&maze, &trace, &RobotSpec::default(), &style)?;
    write_out(args.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Maze(cmd) => maze_command(cmd),
        Command::Sim(cmd) => sim_command(cmd),
        Command::Render(args) => render_command(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
