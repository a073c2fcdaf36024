use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tfde_core::study::{
    cmd_convergence, cmd_lemma1, cmd_solve, cmd_stability, OutputFormat, SigmaChoice, SolveRequest,
    StabilityRequest, StudyConfig, TestFunction,
};
use tfde_core::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BLOW_UP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tfde",
    version,
    about = "Time-fractional diffusion with a nonlocal boundary condition"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON study config; flags given on the command line take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Scheme weight in [0, 1], or `threshold` (stability only)
    #[arg(long, global = true, value_parser = parse_sigma)]
    sigma: Option<SigmaChoice>,
    /// Comma-separated N values, e.g. 20,40,80
    #[arg(long, global = true, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when any run blows up
    #[arg(long, global = true)]
    fail_on_blowup: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Single solve; prints the final level (or every level with --history)
    Solve {
        #[arg(long)]
        problem: Option<String>,
        /// Space intervals; defaults to the last configured level
        #[arg(long)]
        n: Option<usize>,
        /// Time steps; defaults to the h^2 = tau^(2 - gamma) coupling
        #[arg(long)]
        nt: Option<usize>,
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long)]
        history: bool,
    },
    /// Refinement study against the exact solution
    Convergence {
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        t_final: Option<f64>,
    },
    /// Truncation order of the L1 operator
    Lemma1 {
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.9")]
        gammas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512")]
        steps: Vec<usize>,
        #[arg(long, default_value = "time-factor", value_parser = parse_function)]
        function: TestFunction,
        #[arg(long, default_value_t = 1.0)]
        t_final: f64,
    },
    /// Energy-norm decay from a seeded random start, homogeneous data
    Stability {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        nt: usize,
        #[arg(long)]
        t_final: Option<f64>,
    },
}

fn parse_sigma(s: &str) -> Result<SigmaChoice, String> {
    if s == "threshold" {
        return Ok(SigmaChoice::Threshold);
    }
    s.parse::<f64>()
        .map(SigmaChoice::Value)
        .map_err(|_| format!("`{s}` is neither a number nor `threshold`"))
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_function(s: &str) -> Result<TestFunction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. }
            | Error::UnknownProblem { .. }
            | Error::UndefinedNorm { .. }
            | Error::Domain { .. }
            | Error::InvalidGrid(_) => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

/// Config file (or defaults) overlaid with any flags given.
fn study_config(
    common: &Common,
    problem: Option<String>,
    t_final: Option<f64>,
) -> Result<StudyConfig, Failure> {
    let mut config = match &common.config {
        Some(path) => StudyConfig::from_path(path)?,
        None => StudyConfig::default(),
    };
    if let Some(p) = problem {
        config.problem = p;
    }
    if let Some(v) = common.gamma {
        config.gamma = v;
    }
    if let Some(v) = common.alpha {
        config.alpha = v;
    }
    if let Some(v) = common.beta {
        config.beta = v;
    }
    match common.sigma {
        Some(SigmaChoice::Value(v)) => config.sigma = v,
        Some(SigmaChoice::Threshold) => {
            return Err(Failure::Usage(
                "--sigma threshold is only accepted by `stability`".into(),
            ))
        }
        None => {}
    }
    if let Some(levels) = &common.levels {
        config.levels = levels.clone();
    }
    if let Some(v) = t_final {
        config.t_final = v;
    }
    if let Some(out) = &common.out {
        config.output = Some(out.clone());
    }
    if let Some(f) = common.format {
        config.format = f;
    }
    Ok(config)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let common = &cli.common;
    match cli.command {
        Command::Solve {
            problem,
            n,
            nt,
            t_final,
            history,
        } => {
            let config = study_config(common, problem, t_final)?;
            config.validate()?;
            let n = n.unwrap_or(*config.levels.last().expect("validated"));
            let report = cmd_solve(&SolveRequest {
                problem: config.problem.clone(),
                gamma: config.gamma,
                alpha: config.alpha,
                beta: config.beta,
                sigma: config.sigma,
                n,
                nt,
                t_final: config.t_final,
            })?;
            let text = if history {
                report.history_csv()
            } else {
                report.final_level_csv()
            };
            emit(&text, config.output.as_ref())?;
            if let Some(e) = report.errors {
                eprintln!("max error: [z]_0 = {:.5e}, C = {:.5e}", e.full, e.max);
            }
            if let Some(b) = report.outcome.blow_up {
                eprintln!("blow-up at level {} (norm {:e})", b.level, b.norm);
                if common.fail_on_blowup {
                    return Ok(EXIT_BLOW_UP);
                }
            }
            Ok(0)
        }
        Command::Convergence { problem, t_final } => {
            let config = study_config(common, problem, t_final)?;
            let report = cmd_convergence(&config)?;
            emit(&report.render(config.format), config.output.as_ref())?;
            eprintln!("wall time {:.3}s", report.wall_time.as_secs_f64());
            if report.any_blow_up() && common.fail_on_blowup {
                return Ok(EXIT_BLOW_UP);
            }
            Ok(0)
        }
        Command::Lemma1 {
            gammas,
            steps,
            function,
            t_final,
        } => {
            let report = cmd_lemma1(&gammas, &steps, function, t_final)?;
            let text = match common.format.unwrap_or_default() {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Table => report.to_table(),
            };
            emit(&text, common.out.as_ref())?;
            Ok(0)
        }
        Command::Stability { n, nt, t_final } => {
            let mut config = match &common.config {
                Some(path) => StudyConfig::from_path(path)?,
                None => StudyConfig::default(),
            };
            config.gamma = common.gamma.unwrap_or(config.gamma);
            config.alpha = common.alpha.unwrap_or(config.alpha);
            config.beta = common.beta.unwrap_or(config.beta);
            config.t_final = t_final.unwrap_or(config.t_final);
            let sigma = common.sigma.unwrap_or(SigmaChoice::Value(config.sigma));
            let report = cmd_stability(&StabilityRequest {
                gamma: config.gamma,
                alpha: config.alpha,
                beta: config.beta,
                sigma,
                n,
                nt,
                t_final: config.t_final,
                seed: common.seed,
            })?;
            let text = match common.format.unwrap_or(config.format) {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Table => report.summary(),
            };
            emit(&text, common.out.as_ref().or(config.output.as_ref()))?;
            Ok(if report.passed { 0 } else { EXIT_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
