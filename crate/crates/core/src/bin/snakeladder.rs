use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use snakeladder::board::{Board, Square, BUNDLED_BOARDS};
use snakeladder::chain::{GameChain, DEFAULT_S_MAX};
use snakeladder::compete::WinMatrix;
use snakeladder::dice::{self, CycleMode, WinRule};
use snakeladder::report::{self, EdgeRow};
use snakeladder::rng::DEFAULT_SEED;
use snakeladder::simulate::{self, DurationHistogram};

#[derive(Parser)]
#[command(name = "snakeladder", version, about = "Snakes-and-ladders Markov chain analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected moves to finish from every state.
    Expectations(AnalysisArgs),
    /// Finish-time distributions f and g per state.
    Profile {
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Largest step s to export.
        #[arg(long, default_value_t = 100)]
        cap: usize,
    },
    /// Pairwise win (Q), excess (X) or draw matrices.
    Winmatrix {
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long, value_enum, default_value_t = MatrixKind::Q)]
        matrix: MatrixKind,
    },
    /// Intransitive triangles with every edge at least `--cmin`.
    Cycles {
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long, default_value_t = 0.005)]
        cmin: f64,
    },
    /// Monte Carlo estimates of winning edges between states.
    Simulate(SimulateArgs),
    /// Duels and cycle check for dice listed in a file.
    Dice {
        /// TOML dice file.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::PositiveEdge)]
        mode: ModeArg,
        /// Override the file's win rule.
        #[arg(long, value_enum)]
        wins: Option<WinsArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for positive-edge dice cycles.
    DiceSearch {
        /// Face count of each die in the cycle.
        #[arg(long, value_delimiter = ',', default_value = "1,1,2")]
        faces: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        min_value: i64,
        #[arg(long, default_value_t = 6)]
        max_value: i64,
        /// Largest common denominator of a die's face probabilities.
        #[arg(long, default_value_t = 12)]
        max_den: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AnalysisArgs {
    /// Board file, or a bundled board name.
    #[arg(long, default_value = "paper-figure2")]
    board: String,
    #[arg(long, default_value_t = DEFAULT_S_MAX)]
    smax: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "paper-figure2")]
    board: String,
    #[arg(long, value_enum, default_value_t = Method::PerStart)]
    method: Method,
    /// States to compare; consecutive pairs are scored, wrapping around.
    #[arg(long, value_delimiter = ',', default_value = "69,79,73")]
    states: Vec<Square>,
    #[arg(long, default_value_t = 100_000)]
    games: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the duration histogram as CSV.
    #[arg(long)]
    histogram_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Q,
    X,
    Draw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Independent games from each state, compared through histograms.
    PerStart,
    /// Games from 0, every visited state sampled, compared through histograms.
    Trajectory,
    /// Independent head-to-head races, with a standard error.
    Paired,
}

impl Method {
    fn label(self) -> &'static str {
        match self {
            Method::PerStart => "per-start",
            Method::Trajectory => "trajectory",
            Method::Paired => "paired",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    StrictMajority,
    PositiveEdge,
}

#[derive(Clone, Copy, ValueEnum)]
enum WinsArg {
    Higher,
    Lower,
}

fn load_board(spec: &str) -> Result<Board> {
    if BUNDLED_BOARDS.contains(&spec) {
        return Ok(Board::bundled(spec)?);
    }
    Board::load_path(spec).with_context(|| format!("cannot load board {spec:?}"))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn no_text(format: Format) -> Result<()> {
    if let Format::Text = format {
        bail!("--format text is only available for the dice command");
    }
    Ok(())
}

fn profile_for(args: &AnalysisArgs) -> Result<(Board, GameChain, snakeladder::DurationProfile)> {
    if args.smax < 1 {
        bail!("--smax must be at least 1");
    }
    let board = load_board(&args.board)?;
    let chain = GameChain::build(&board);
    let profile = chain.absorption_profile(args.smax)?;
    Ok((board, chain, profile))
}

fn cmd_expectations(args: &AnalysisArgs) -> Result<()> {
    no_text(args.format)?;
    let (_, chain, profile) = profile_for(args)?;
    let rows = report::expectation_rows(
        chain.states(),
        &profile.expected_durations(),
        &chain.expected_durations_exact()?,
    );
    let text = match args.format {
        Format::Json => report::to_json(&rows)?,
        _ => report::expectations_csv(&rows)?,
    };
    emit(args.out.as_ref(), &text)
}

fn cmd_profile(args: &AnalysisArgs, cap: usize) -> Result<()> {
    no_text(args.format)?;
    let (_, _, profile) = profile_for(args)?;
    let rows = report::profile_rows(&profile, cap);
    let text = match args.format {
        Format::Json => report::to_json(&rows)?,
        _ => report::profile_csv(&rows)?,
    };
    emit(args.out.as_ref(), &text)
}

#[derive(Serialize)]
struct MatricesJson<'a> {
    states: &'a [Square],
    s_max: usize,
    q: &'a [Vec<f64>],
    x: &'a [Vec<f64>],
    draw: &'a [Vec<f64>],
}

fn cmd_winmatrix(args: &AnalysisArgs, kind: MatrixKind) -> Result<()> {
    no_text(args.format)?;
    let (_, _, profile) = profile_for(args)?;
    let win = WinMatrix::from_profile(&profile);
    let text = match args.format {
        Format::Json => report::to_json(&MatricesJson {
            states: win.states(),
            s_max: win.s_max(),
            q: win.q_matrix(),
            x: win.x_matrix(),
            draw: win.draw_matrix(),
        })?,
        _ => {
            let m = match kind {
                MatrixKind::Q => win.q_matrix(),
                MatrixKind::X => win.x_matrix(),
                MatrixKind::Draw => win.draw_matrix(),
            };
            report::matrix_csv(win.states(), m)?
        }
    };
    emit(args.out.as_ref(), &text)
}

fn cmd_cycles(args: &AnalysisArgs, cmin: f64) -> Result<()> {
    no_text(args.format)?;
    let (_, _, profile) = profile_for(args)?;
    let win = WinMatrix::from_profile(&profile);
    let triangles = win.triangles_above(cmin);
    let text = match args.format {
        Format::Json => report::to_json(&triangles)?,
        _ => report::triangles_csv(&triangles)?,
    };
    emit(args.out.as_ref(), &text)
}

fn scored_pairs(states: &[Square]) -> Vec<(Square, Square)> {
    match states.len() {
        0 | 1 => Vec::new(),
        2 => vec![(states[0], states[1])],
        n => (0..n).map(|t| (states[t], states[(t + 1) % n])).collect(),
    }
}

#[derive(Serialize)]
struct SimulationJson {
    edges: Vec<EdgeRow>,
    histogram: Vec<report::HistogramRow>,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    no_text(args.format)?;
    if args.games < 1 {
        bail!("--games must be at least 1");
    }
    let board = load_board(&args.board)?;
    let pairs = scored_pairs(&args.states);
    let method = args.method.label();

    let mut edges = Vec::new();
    let mut histogram: Option<DurationHistogram> = None;
    match args.method {
        Method::PerStart | Method::Trajectory => {
            let h = match args.method {
                Method::PerStart => {
                    simulate::simulate_per_start(&board, &args.states, args.games, args.seed)?
                }
                _ => simulate::simulate_trajectory_reuse(&board, args.games, args.seed)?,
            };
            for &(i, j) in &pairs {
                let e = simulate::edge_from_histograms(&h, i, j)?;
                edges.push(EdgeRow::new(i, j, &e, method, args.games, args.seed));
            }
            histogram = Some(h);
        }
        Method::Paired => {
            if args.games < 2 {
                bail!("--games must be at least 2 for paired races");
            }
            for &(i, j) in &pairs {
                let e = simulate::edge_paired_games(&board, i, j, args.games, args.seed)?;
                edges.push(EdgeRow::new(i, j, &e, method, args.games, args.seed));
            }
        }
    }

    if let (Some(path), Some(h)) = (&args.histogram_out, &histogram) {
        fs::write(path, report::histogram_csv(h)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let text = match args.format {
        Format::Json => report::to_json(&SimulationJson {
            edges,
            histogram: histogram.as_ref().map(report::histogram_rows).unwrap_or_default(),
        })?,
        _ => report::edges_csv(&edges)?,
    };
    emit(args.out.as_ref(), &text)
}

#[derive(Serialize)]
struct DuelJson {
    a: String,
    b: String,
    win: String,
    draw: String,
    loss: String,
    edge: String,
    win_decimal: f64,
    draw_decimal: f64,
    loss_decimal: f64,
    edge_decimal: f64,
}

#[derive(Serialize)]
struct DiceJson {
    wins: &'static str,
    mode: &'static str,
    holds: bool,
    duels: Vec<DuelJson>,
}

fn cmd_dice(
    file: &PathBuf,
    mode: ModeArg,
    wins: Option<WinsArg>,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<()> {
    let set = dice::load_dice(file).with_context(|| format!("cannot load dice {}", file.display()))?;
    let rule = match wins {
        Some(WinsArg::Higher) => WinRule::Higher,
        Some(WinsArg::Lower) => WinRule::Lower,
        None => set.wins,
    };
    let (cycle_mode, mode_name) = match mode {
        ModeArg::StrictMajority => (CycleMode::StrictMajority, "strict-majority"),
        ModeArg::PositiveEdge => (CycleMode::PositiveEdge, "positive-edge"),
    };
    let check = dice::verify_cycle(&set.dice, cycle_mode, rule)?;
    let n = set.dice.len();
    let duels: Vec<DuelJson> = check
        .duels
        .iter()
        .enumerate()
        .map(|(t, d)| DuelJson {
            a: set.dice[t].label().to_string(),
            b: set.dice[(t + 1) % n].label().to_string(),
            win: d.win.to_string(),
            draw: d.draw.to_string(),
            loss: d.loss.to_string(),
            edge: d.edge().to_string(),
            win_decimal: dice::approx(&d.win),
            draw_decimal: dice::approx(&d.draw),
            loss_decimal: dice::approx(&d.loss),
            edge_decimal: dice::approx(&d.edge()),
        })
        .collect();

    let text = match format {
        Format::Json => report::to_json(&DiceJson {
            wins: rule.as_str(),
            mode: mode_name,
            holds: check.holds,
            duels,
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for d in &duels {
                w.serialize(d)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut s = format!("{} value wins, mode {mode_name}\n", rule.as_str());
            for (t, d) in duels.iter().enumerate() {
                s += &format!(
                    "{} vs {}: win {} ({:.6}), draw {} ({:.6}), loss {} ({:.6}), edge {} ({:.6})\n",
                    set.dice[t],
                    set.dice[(t + 1) % n],
                    d.win,
                    d.win_decimal,
                    d.draw,
                    d.draw_decimal,
                    d.loss,
                    d.loss_decimal,
                    d.edge,
                    d.edge_decimal
                );
            }
            s += &format!("cycle: {}\n", if check.holds { "holds" } else { "does not hold" });
            s
        }
    };
    emit(out, &text)
}

fn cmd_dice_search(
    faces: &[usize],
    values: std::ops::RangeInclusive<i64>,
    max_den: u64,
    out: Option<&PathBuf>,
) -> Result<()> {
    if faces.len() < 3 {
        bail!("a cycle needs at least 3 dice, got {}", faces.len());
    }
    let found = dice::search_cycles(faces, values, max_den);
    let mut s = String::new();
    for cycle in &found {
        let line: Vec<String> = cycle.iter().map(|d| d.to_string()).collect();
        s += &line.join(" > ");
        s += "\n";
    }
    s += &format!("{} cycle(s) found\n", found.len());
    emit(out, &s)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Expectations(a) => cmd_expectations(a),
        Command::Profile { analysis, cap } => cmd_profile(analysis, *cap),
        Command::Winmatrix { analysis, matrix } => cmd_winmatrix(analysis, *matrix),
        Command::Cycles { analysis, cmin } => cmd_cycles(analysis, *cmin),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Dice {
            file,
            mode,
            wins,
            format,
            out,
        } => cmd_dice(file, *mode, *wins, *format, out.as_ref()),
        Command::DiceSearch {
            faces,
            min_value,
            max_value,
            max_den,
            out,
        } => cmd_dice_search(faces, *min_value..=*max_value, *max_den, out.as_ref()),
    }
}
