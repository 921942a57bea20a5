//! `qentropy`: tables of entropies, uncertainty relations and the
//! acceptance suite, as CSV or JSON.

mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qentropy::entropy::{EntropyKind, Evaluator, Regime, TOLERANCE_FLOOR};
use qentropy::systems::{Family, Space, SystemDescriptor};

use args::{AlphaSpec, Floats, QuantumNumbers, Spacing};
use output::{Format, SIGNIFICANT_DIGITS};

/// Relative quadrature tolerance for sweeps.
pub const SWEEP_REL_TOL: f64 = 1e-8;

/// Relative quadrature tolerance for `verify`.
pub const VERIFY_REL_TOL: f64 = 1e-10;

pub const REL_TOL_ENV: &str = "QENTROPY_REL_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// A reader that closed the pipe early (e.g. `head`) is not a failure.
    fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e.kind()),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e.kind()),
                _ => None,
            },
            CliError::Json(e) => e.io_error_kind(),
            CliError::Usage(_) => None,
        };
        io == Some(io::ErrorKind::BrokenPipe)
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qentropy", version, about = "Entropies and entropic uncertainty relations of solvable 1D quantum systems")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the table to FILE instead of stdout.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    /// Relative quadrature tolerance; overrides QENTROPY_REL_TOL.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Position,
    Momentum,
    Both,
}

impl SpaceArg {
    fn spaces(self) -> Vec<Space> {
        match self {
            SpaceArg::Position => vec![Space::Position],
            SpaceArg::Momentum => vec![Space::Momentum],
            SpaceArg::Both => Space::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Renyi,
    Tsallis,
    Shannon,
    Onicescu,
}

impl From<KindArg> for EntropyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Renyi => EntropyKind::Renyi,
            KindArg::Tsallis => EntropyKind::Tsallis,
            KindArg::Shannon => EntropyKind::Shannon,
            KindArg::Onicescu => EntropyKind::Onicescu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    AtZero,
    NearOne,
    AtInfinity,
    AtThreshold,
    NearHalf,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::AtZero => Regime::AtZero,
            RegimeArg::NearOne => Regime::NearOne,
            RegimeArg::AtInfinity => Regime::AtInfinity,
            RegimeArg::AtThreshold => Regime::AtThreshold,
            RegimeArg::NearHalf => Regime::NearHalf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpansionTarget {
    /// One entropy in one space.
    Entropy,
    /// The Rényi sum R_ρ(α) + R_γ(β).
    Sum,
    /// Both sides of the Tsallis relation.
    Sides,
}

/// Which states to evaluate.
#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// ho, robin, q1d, neumann or dirichlet.
    #[arg(long, value_parser = parse_family)]
    system: Family,
    /// Quantum numbers: `2`, `0..3` (inclusive) or `1,3`. Defaults to the ground state.
    #[arg(long)]
    n: Option<QuantumNumbers>,
    /// Natural length of the system.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

impl SystemArgs {
    fn descriptors(&self) -> Result<Vec<SystemDescriptor>, CliError> {
        let ground = match self.system {
            Family::Q1DHydrogen | Family::DirichletWell => 1,
            _ => 0,
        };
        let ns = self.n.clone().map_or(vec![ground], |q| q.0);
        ns.into_iter()
            .map(|n| SystemDescriptor::new(self.system, n, self.scale).map_err(|e| CliError::Usage(e.to_string())))
            .collect()
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

/// α grid selection.
#[derive(Debug, Clone, Args)]
struct GridArgs {
    /// `min:max:count` or a comma list; `inf` is accepted.
    #[arg(long, allow_hyphen_values = true)]
    alpha: AlphaSpec,
    /// Distribution of range points.
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    spacing: Spacing,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropies of single states on an α grid.
    Entropy {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_enum, default_value_t = SpaceArg::Both)]
        space: SpaceArg,
        /// Comma-separated kinds.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "renyi")]
        kind: Vec<KindArg>,
        /// Required for Rényi and Tsallis.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<AlphaSpec>,
        #[arg(long, value_enum, default_value_t = Spacing::Linear)]
        spacing: Spacing,
    },
    /// Rényi sum R_ρ(α) + R_γ(β) against its lower bound f(α).
    Uncertainty {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Both sides of the Tsallis relation.
    TsallisCheck {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Scan of a ground state toward α = ½ with extrapolation.
    Conjecture {
        #[command(flatten)]
        system: SystemArgs,
        /// Number of points α_j = ½ + 2^(−j).
        #[arg(long, default_value_t = 12)]
        points: usize,
        /// Also scan excited states.
        #[arg(long)]
        allow_excited: bool,
    },
    /// Maximum of the Rényi sum over α.
    Maximum {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Heisenberg product Δx·Δk from moments and from the momentum operator.
    Heisenberg {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Coefficients of an asymptotic expansion.
    Expansion {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, value_enum, default_value_t = ExpansionTarget::Entropy)]
        target: ExpansionTarget,
        #[arg(long, value_enum, default_value_t = SpaceArg::Position)]
        space: SpaceArg,
        #[arg(long, value_enum, default_value_t = KindArg::Renyi)]
        kind: KindArg,
    },
    /// Discrete distributions and level systems.
    Thermo {
        #[command(subcommand)]
        command: ThermoCommand,
    },
    /// Run acceptance criteria; exits 1 on any failure.
    Verify {
        /// `all` or comma-separated criterion ids.
        #[arg(default_value = "all")]
        suite: String,
        /// Print every check, not only the summary lines.
        #[arg(long, short)]
        verbose: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ThermoCommand {
    /// Entropies of a probability vector.
    Entropy {
        #[arg(long)]
        probs: Floats,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "renyi")]
        kind: Vec<KindArg>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<AlphaSpec>,
        #[arg(long, value_enum, default_value_t = Spacing::Linear)]
        spacing: Spacing,
    },
    /// Joint entropy of independent f and g against the composition laws.
    Additivity {
        #[arg(long)]
        f: Floats,
        #[arg(long)]
        g: Floats,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Tsallis equilibrium of a level system, with the Gibbs correction.
    Equilibrium {
        #[arg(long)]
        energies: Floats,
        #[arg(long)]
        temperature: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Rényi entropy of order T1/T2 against the free-energy difference quotient.
    FreeEnergy {
        #[arg(long)]
        energies: Floats,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
    },
}

fn rel_tol(flag: Option<f64>, default: f64) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(REL_TOL_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{REL_TOL_ENV}: invalid number '{s}'")))?,
            Err(_) => default,
        },
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("relative tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(tol)
}

/// Everything a command needs besides its own flags.
pub struct Context {
    pub eval: Evaluator,
    pub jobs: usize,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let g = cli.global;
    let default_tol = if matches!(cli.command, Command::Verify { .. }) { VERIFY_REL_TOL } else { SWEEP_REL_TOL };
    let eval = Evaluator::new(rel_tol(g.rel_tol, default_tol)?);
    let ctx = Context { eval, jobs: g.jobs };

    let table = match cli.command {
        Command::Verify { suite, verbose } => {
            let (text, failed) = commands::verify(&ctx, &suite, verbose)?;
            let mut w = open_output(&g.out)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            return Ok(if failed { 1 } else { 0 });
        }
        Command::Entropy { system, space, kind, alpha, spacing } => {
            let kinds: Vec<EntropyKind> = kind.into_iter().map(Into::into).collect();
            commands::entropy(&ctx, &system.descriptors()?, &space.spaces(), &kinds, alpha.as_ref(), spacing)?
        }
        Command::Uncertainty { system, grid } => {
            commands::uncertainty(&ctx, &system.descriptors()?, &grid.alpha.points(grid.spacing)?)
        }
        Command::TsallisCheck { system, grid } => {
            commands::tsallis_check(&ctx, &system.descriptors()?, &grid.alpha.points(grid.spacing)?)
        }
        Command::Conjecture { system, points, allow_excited } => {
            commands::conjecture(&ctx, &system.descriptors()?, points, allow_excited)?
        }
        Command::Maximum { system } => commands::maximum(&ctx, &system.descriptors()?),
        Command::Heisenberg { system } => commands::heisenberg(&ctx, &system.descriptors()?),
        Command::Expansion { system, regime, target, space, kind } => {
            let space = match space {
                SpaceArg::Position => Space::Position,
                SpaceArg::Momentum => Space::Momentum,
                SpaceArg::Both => return Err(CliError::Usage("expansion needs a single --space".into())),
            };
            commands::expansion(&system.descriptors()?, regime.into(), target, space, kind.into())?
        }
        Command::Thermo { command } => match command {
            ThermoCommand::Entropy { probs, kind, alpha, spacing } => {
                let kinds: Vec<EntropyKind> = kind.into_iter().map(Into::into).collect();
                commands::thermo_entropy(&probs.0, &kinds, alpha.as_ref(), spacing)?
            }
            ThermoCommand::Additivity { f, g, grid } => {
                commands::thermo_additivity(&f.0, &g.0, &grid.alpha.points(grid.spacing)?)?
            }
            ThermoCommand::Equilibrium { energies, temperature, grid } => {
                commands::thermo_equilibrium(&energies.0, temperature, &grid.alpha.points(grid.spacing)?)?
            }
            ThermoCommand::FreeEnergy { energies, t1, t2 } => commands::thermo_free_energy(&energies.0, t1, t2)?,
        },
    };

    let mut w = open_output(&g.out)?;
    match g.format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => table.write_json(&mut w, metadata(&ctx.eval))?,
    }
    w.flush()?;

    let nonconvergent = table.count_status(commands::NONCONVERGENT);
    if nonconvergent > 0 {
        eprintln!("{nonconvergent} row(s) did not converge");
        return Ok(3);
    }
    Ok(0)
}

fn metadata(eval: &Evaluator) -> serde_json::Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": std::env::args().skip(1).collect::<Vec<_>>(),
        "rel_tol": eval.integrator.rel_tol,
        "abs_tol": eval.integrator.abs_tol,
        "max_subdivisions": eval.integrator.max_subdivisions,
        "tolerance_floor": TOLERANCE_FLOOR,
        "significant_digits": SIGNIFICANT_DIGITS,
    })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn tolerance_flag_validation() {
        assert_eq!(rel_tol(Some(1e-6), 1e-8).unwrap(), 1e-6);
        assert!(rel_tol(Some(0.0), 1e-8).is_err());
        assert!(rel_tol(Some(2.0), 1e-8).is_err());
    }
}
