//! The `dilemma` command-line tool.
//!
//! Exit codes: 0 success, 1 not a dilemma (or a failed verification),
//! 2 no resolving transfer matrix, 3 bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::game::{self, Action, ActionProfile, DilemmaKind, NormalFormGame, DEFAULT_TOL};
use crate::games::{self, BaseGame, BaseGameParams, FunctionalParams, GraphKind, LevelMode};
use crate::io;
use crate::self_interest::{self, GeneralOptions, SecondStage};
use crate::transfer;
use crate::examples;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_DILEMMA: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Largest player count `bench` accepts unless `--cap` says otherwise.
pub const DEFAULT_BENCH_CAP: usize = 17;

#[derive(Debug, Parser)]
#[command(name = "dilemma", version, about = "Classify social dilemmas and compute minimal reward transfer matrices")]
pub struct Cli {
    /// Value for the small constant subtracted in the scaled-pd example.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    pub epsilon: f64,

    /// Comparison tolerance for dilemma and dominance checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, value_parser = positive)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report whether a game is a strict, partial or non-dilemma.
    Classify { game: PathBuf },
    /// Compute a self-interest level and its transfer matrix.
    Solve(SolveArgs),
    /// Write a generated game as JSON.
    Generate {
        #[command(subcommand)]
        what: GenerateCommand,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Apply a transfer matrix and write the resulting game.
    Transform {
        game: PathBuf,
        /// Matrix JSON or a result file from `solve`.
        matrix: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a target profile is dominant after transfers.
    Verify {
        game: PathBuf,
        /// Matrix JSON or a result file from `solve`.
        matrix: PathBuf,
        /// Defaults to the result file's target, else all-C.
        #[arg(long)]
        target: Option<String>,
    },
    /// Closed-form levels and matrices for the graphical dilemmas.
    Analytic {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also print the closed-form transfer matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Time the general solver on Functional dilemmas.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Symmetric,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StageArg {
    None,
    MaxDiagonal,
    MinTransfers,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub game: PathBuf,
    #[arg(long, value_enum, default_value_t = SolveMode::General)]
    pub mode: SolveMode,
    /// Target profile such as DCC; defaults to all-C.
    #[arg(long)]
    pub target: Option<String>,
    /// Let rows sum to less than one.
    #[arg(long)]
    pub allow_excess: bool,
    /// Solve even when the game is not a dilemma.
    #[arg(long)]
    pub force: bool,
    /// Tie-break among optimal matrices.
    #[arg(long, value_enum)]
    pub second_stage: Option<StageArg>,
    /// Solve only the first row using this cyclic player relabelling (1-based, comma separated).
    #[arg(long, value_delimiter = ',')]
    pub generator: Option<Vec<usize>>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long, value_parser = parse_graph)]
    pub graph: GraphKind,
    #[arg(long, value_parser = parse_base, default_value = "pd")]
    pub base: BaseGame,
    #[arg(short, long)]
    pub n: usize,
    #[arg(short, long, default_value_t = 3.0)]
    pub c: f64,
    #[arg(short, long, default_value_t = 1.0)]
    pub d: f64,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// A graphical dilemma.
    Graph(GraphArgs),
    /// The Functional dilemma.
    Functional {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, default_value_t = 3.0)]
        c: f64,
    },
    /// One of the built-in example games.
    Example {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(examples::NAMES))]
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 8)]
    pub n_min: usize,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(short, long, default_value_t = 3.0)]
    pub c: f64,
    #[arg(long, default_value_t = DEFAULT_BENCH_CAP)]
    pub cap: usize,
    /// Print `n,seconds,g_star` CSV instead of a table.
    #[arg(long)]
    pub csv: bool,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got \"{s}\"")),
    }
}

fn parse_graph(s: &str) -> std::result::Result<GraphKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_base(s: &str) -> std::result::Result<BaseGame, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Maps a library error to its exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::NotAvailable(_) => EXIT_INPUT,
        Error::NotADilemma(_) => EXIT_NOT_DILEMMA,
        Error::NotResolvable(_) | Error::Internal(_) => EXIT_INFEASIBLE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn read_game(path: &Path) -> Result<NormalFormGame> {
    io::parse_game(&read(path)?).map_err(|e| match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Internal(format!("write failed: {e}"))),
    }
}

fn parse_target(s: Option<&str>, n: usize) -> Result<Option<ActionProfile>> {
    let Some(s) = s else { return Ok(None) };
    let p = ActionProfile::parse(s)?;
    if p.players() != n {
        return Err(Error::invalid(format!("target \"{s}\" has {} actions for a {n}-player game", p.players())));
    }
    Ok(Some(p))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Classify { game } => classify(&read_game(game)?, cli.tol, out),
        Command::Solve(args) => solve(args, out, err),
        Command::Generate { what, output } => {
            let game = generate(what, cli.epsilon)?;
            emit(&io::write_game(&game), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Transform { game, matrix, output } => {
            let game = read_game(game)?;
            let (t, _) = io::parse_matrix_or_result(&read(matrix)?)?;
            let moved = transfer::apply_transfers(&game, &t)?;
            emit(&io::write_game(&moved), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { game, matrix, target } => {
            let game = read_game(game)?;
            let (t, file_target) = io::parse_matrix_or_result(&read(matrix)?)?;
            let target = parse_target(target.as_deref(), game.players())?
                .or(file_target)
                .unwrap_or_else(|| ActionProfile::all(Action::C, game.players()));
            verify(&game, &t, target, cli.tol, out)
        }
        Command::Analytic { graph, matrix } => analytic(graph, *matrix, out),
        Command::Bench(args) => bench(args, out, err),
    }
}

fn classify(game: &NormalFormGame, tol: f64, out: &mut dyn Write) -> Result<i32> {
    let class = game::classify_dilemma_with(game, &game::Utilitarian, tol);
    let w = |e: std::io::Error| Error::Internal(e.to_string());
    writeln!(out, "{class}").map_err(w)?;
    for witness in &class.witnesses {
        writeln!(out, "  {witness}").map_err(w)?;
    }
    Ok(if class.kind == DilemmaKind::NotDilemma { EXIT_NOT_DILEMMA } else { EXIT_OK })
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let game = read_game(&args.game)?;
    let n = game.players();
    let target = parse_target(args.target.as_deref(), n)?;
    let result = match args.mode {
        SolveMode::Symmetric => {
            if !args.force {
                let class = game::classify_dilemma(&game);
                if !class.is_dilemma() {
                    return Err(Error::NotADilemma(class));
                }
            }
            if args.allow_excess || args.generator.is_some() {
                let _ = writeln!(err, "warning: --allow-excess and --generator only apply to general mode");
            }
            self_interest::symmetrical_level(&game, target)?
        }
        SolveMode::General => {
            let mut opts = GeneralOptions::default().with_excess(args.allow_excess).forced(args.force);
            opts.target = target;
            if let Some(stage) = args.second_stage {
                opts = opts.with_second_stage(match stage {
                    StageArg::None => SecondStage::None,
                    StageArg::MaxDiagonal => SecondStage::MaxDiagonalSum,
                    StageArg::MinTransfers => SecondStage::MinTransfers,
                });
            }
            match &args.generator {
                Some(g) => {
                    if g.contains(&0) {
                        return Err(Error::invalid("generator entries are 1-based player numbers"));
                    }
                    let gen: Vec<usize> = g.iter().map(|k| k - 1).collect();
                    self_interest::general_level_symmetric_fastpath(&game, &gen, &opts)?
                }
                None => self_interest::general_level(&game, &opts)?,
            }
        }
    };
    emit(&io::write_result(&result), args.output.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn generate(what: &GenerateCommand, epsilon: f64) -> Result<NormalFormGame> {
    match what {
        GenerateCommand::Graph(g) => {
            let params = BaseGameParams::new(g.base, g.c, g.d)?;
            games::build_graphical(g.graph, params, g.n)
        }
        GenerateCommand::Functional { n, c } => games::build_functional(FunctionalParams::new(*n, *c)?),
        GenerateCommand::Example { name } => {
            examples::by_name(name, epsilon).ok_or_else(|| Error::invalid(format!("unknown example \"{name}\"")))
        }
    }
}

fn verify(game: &NormalFormGame, t: &transfer::TransferMatrix, target: ActionProfile, tol: f64, out: &mut dyn Write) -> Result<i32> {
    let report = transfer::verify_resolution(game, t, target, tol)?;
    let w = |e: std::io::Error| Error::Internal(e.to_string());
    let verdict = if report.strictly_dominant {
        "strictly dominant"
    } else if report.weakly_dominant {
        "weakly dominant"
    } else {
        "not dominant"
    };
    writeln!(out, "target {target}: {verdict}").map_err(w)?;
    for v in &report.violations {
        let kind = if v.gap > tol { "violated" } else { "binding" };
        writeln!(
            out,
            "  player {} coplayers {}: {kind} (gain from deviating {:+.6e})",
            v.player + 1,
            v.coplayers,
            v.gap
        )
        .map_err(w)?;
    }
    Ok(if report.weakly_dominant { EXIT_OK } else { EXIT_NOT_DILEMMA })
}

fn analytic(g: &GraphArgs, with_matrix: bool, out: &mut dyn Write) -> Result<i32> {
    let params = BaseGameParams::new(g.base, g.c, g.d)?;
    games::build_graphical(g.graph, params, g.n)?;
    let s = games::analytic_level(g.graph, params, g.n, LevelMode::Symmetric);
    let gl = games::analytic_level(g.graph, params, g.n, LevelMode::General);
    let w = |e: std::io::Error| Error::Internal(e.to_string());
    writeln!(out, "{:<10}{:>22}", "s_star", io::format_number(s.value)).map_err(w)?;
    let suffix = if gl.is_limit { "  (n -> infinity limit)" } else { "" };
    writeln!(out, "{:<10}{:>22}{suffix}", "g_star", io::format_number(gl.value)).map_err(w)?;
    if with_matrix {
        let m = games::analytic_matrix(g.graph, params, g.n)?;
        out.write_all(io::write_matrix(&m.matrix).as_bytes()).map_err(w)?;
    }
    Ok(EXIT_OK)
}

fn bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if args.n_min < 2 || args.n_min > args.n_max {
        return Err(Error::invalid(format!("need 2 <= n-min <= n-max (got {}..{})", args.n_min, args.n_max)));
    }
    if args.n_max > args.cap {
        return Err(Error::invalid(format!(
            "n-max = {} exceeds the cap of {} players (the game table grows as 2^n * n)",
            args.n_max, args.cap
        )));
    }
    let w = |e: std::io::Error| Error::Internal(e.to_string());
    if args.csv {
        writeln!(out, "n,seconds,g_star").map_err(w)?;
    } else {
        writeln!(out, "{:>3} {:>12} {:>12} {:>8}", "n", "seconds", "g_star", "ratio").map_err(w)?;
    }
    let mut prev: Option<f64> = None;
    for n in args.n_min..=args.n_max {
        let game = games::build_functional(FunctionalParams::new(n, args.c)?)?;
        let start = Instant::now();
        let r = self_interest::general_level(&game, &GeneralOptions::default().forced(true))?;
        let secs = start.elapsed().as_secs_f64();
        if args.csv {
            writeln!(out, "{n},{secs:.6},{}", io::format_number(r.level)).map_err(w)?;
        } else {
            let ratio = prev.map(|p| format!("{:.2}", secs / p)).unwrap_or_else(|| "-".into());
            writeln!(out, "{n:>3} {secs:>12.6} {:>12.6} {ratio:>8}", r.level).map_err(w)?;
        }
        if let Some(p) = prev {
            log::info!("n = {n}: {:.2}x the time for n = {}", secs / p, n - 1);
        }
        prev = Some(secs);
    }
    let _ = err.flush();
    Ok(EXIT_OK)
}
