mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Command, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "selfmetric", version, about = "Self-perimeters and self-volumes of convex bodies")]
struct Cli {
    /// Grid resolution: 512 for perimeter quadrature, 4096 for alexandrov.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Agreement tolerance for checks, in (0, 1e-2].
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest dimension the self-volume recursion accepts.
    #[arg(long, global = true, default_value_t = 5)]
    max_dim: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Self-perimeter of a polygon or smooth profile.
    Perimeter(PerimeterArgs),
    /// Recursive self-volume of a polytope.
    Volume(VolumeArgs),
    /// Optimal interior center of a polygon, from several starts.
    Center(CenterArgs),
    /// Regular k-gon closed forms against exact polygon sums.
    KgonTable(KgonArgs),
    /// Perturbative solution of the planar inverse problem.
    Alexandrov(AlexandrovArgs),
    /// Self-volume before and after random linear maps.
    InvarianceCheck(InvarianceArgs),
    /// Exploratory hill climbing for extreme self-volumes.
    ConjectureSearch(ConjectureArgs),
}

#[derive(Args, Debug)]
struct PerimeterArgs {
    #[arg(long)]
    shape: PathBuf,
    /// Reference point, comma separated; defaults to the origin.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    /// Read --center as barycentric weights of a triangle (the last weight may be omitted).
    #[arg(long)]
    barycentric: bool,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    variant: VariantArg,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[arg(long)]
    shape: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    /// Also write the per-facet breakdown as CSV.
    #[arg(long)]
    breakdown: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CenterArgs {
    #[arg(long)]
    shape: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Directed)]
    variant: VariantArg,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
}

#[derive(Args, Debug)]
struct KgonArgs {
    #[arg(long, default_value_t = 3)]
    k_min: usize,
    #[arg(long, default_value_t = 16)]
    k_max: usize,
}

#[derive(Args, Debug)]
struct AlexandrovArgs {
    /// Density file `{"coeffs": [[k, re, im], ...], "epsilon": e}`.
    #[arg(long)]
    phi: PathBuf,
    /// Overrides the file's epsilon.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// Harmonics kept in the reconstructed radius.
    #[arg(long, default_value_t = 64)]
    kmax: usize,
    /// Also write the polar plot as a standalone SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InvarianceArgs {
    #[arg(long)]
    shape: PathBuf,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    pairs: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 0.1)]
    step_size: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantArg {
    Directed,
    Busemann,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignArg {
    Plus,
    Minus,
}

fn configure_threads() {
    if let Some(n) = std::env::var("SELFMETRIC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, inputs) = match &cli.command {
        Cmd::Perimeter(a) => (Command::Perimeter, vec![a.shape.clone()]),
        Cmd::Volume(a) => (Command::Volume, vec![a.shape.clone()]),
        Cmd::Center(a) => (Command::Center, vec![a.shape.clone()]),
        Cmd::KgonTable(_) => (Command::KgonTable, vec![]),
        Cmd::Alexandrov(a) => (Command::Alexandrov, vec![a.phi.clone()]),
        Cmd::InvarianceCheck(a) => (Command::InvarianceCheck, vec![a.shape.clone()]),
        Cmd::ConjectureSearch(_) => (Command::ConjectureSearch, vec![]),
    };
    let cfg = RunConfig {
        command,
        inputs,
        output: cli.out.clone(),
        nodes: cli.nodes.unwrap_or(match command {
            Command::Alexandrov => selfmetric::alexandrov::DEFAULT_NODES,
            _ => 512,
        }),
        tolerance: cli.tolerance,
        seed: cli.seed,
        max_dim: cli.max_dim,
    };
    cfg.validate()?;
    let artifacts = match &cli.command {
        Cmd::Perimeter(a) => commands::perimeter(&cfg, a.center.as_deref(), a.barycentric, a.variant)?,
        Cmd::Volume(a) => commands::volume(&cfg, a.center.as_deref(), a.breakdown.as_deref())?,
        Cmd::Center(a) => commands::center(&cfg, a.variant, a.restarts)?,
        Cmd::KgonTable(a) => commands::kgon_table(&cfg, a.k_min, a.k_max)?,
        Cmd::Alexandrov(a) => {
            commands::alexandrov(&cfg, a.epsilon, a.sign, a.kmax, a.svg.as_deref())?
        }
        Cmd::InvarianceCheck(a) => commands::invariance_check(&cfg, a.trials)?,
        Cmd::ConjectureSearch(a) => commands::conjecture_search(
            &cfg,
            selfmetric::conjecture::SearchConfig {
                dim: a.dim,
                pairs: a.pairs,
                restarts: a.restarts,
                steps: a.steps,
                step_size: a.step_size,
                seed: cfg.seed,
            },
        )?,
    };
    artifacts.write(cfg.output.as_deref())
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
