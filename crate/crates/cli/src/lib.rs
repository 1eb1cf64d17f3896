//! Argument parsing and command dispatch for the `equigh` binary.

use std::path::PathBuf;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use equigh::field::is_prime;
use equigh::gh::GhBudget;
use equigh::group::HomBudget;
use equigh::vr::DEFAULT_MAX_SIMPLICES;

mod run;

pub use run::{execute, Outcome};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CliError {
    #[error("unknown flag `{0}`")]
    UnknownFlag(String),
    #[error("bad value for `{flag}`: {msg}")]
    BadValue { flag: String, msg: String },
    #[error("missing input: {0}")]
    MissingInput(String),
    /// `--help` / `--version` text.
    #[error("{0}")]
    Help(String),
}

fn bad(flag: &str, msg: impl Into<String>) -> CliError {
    CliError::BadValue { flag: flag.to_string(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSource {
    File(PathBuf),
    /// `kind[,key=value]*`
    Sample(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub pair_orbits: usize,
    pub nodes: u64,
    pub simplices: usize,
    pub hom_group_order: usize,
    pub hom_degree: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        let gh = GhBudget::default();
        let hom = HomBudget::default();
        Budgets {
            pair_orbits: gh.max_pair_orbits,
            nodes: gh.max_nodes,
            simplices: DEFAULT_MAX_SIMPLICES,
            hom_group_order: hom.max_group_order,
            hom_degree: hom.max_degree,
        }
    }
}

impl Budgets {
    pub fn gh(&self) -> GhBudget {
        GhBudget { max_pair_orbits: self.pair_orbits, max_nodes: self.nodes }
    }

    pub fn hom(&self) -> HomBudget {
        HomBudget { max_group_order: self.hom_group_order, max_degree: self.hom_degree }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhMode {
    /// exact value, falling back to certificates over budget
    Auto,
    Exact,
    Oracle,
    BoundsOnly,
    FunctionPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NetModeArg {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaOp {
    Zeta,
    EuclidBounds,
    Nu,
    Finiteness,
    Homs,
    CoveringCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Gh { mode: GhMode, quotients: bool },
    Persist { max_dim: usize, degrees: Option<Vec<usize>>, r_max: Option<String>, export_boundary: Option<PathBuf> },
    Eigen { max_dim: usize, degrees: Option<Vec<usize>>, r_max: Option<String>, g: Option<usize>, lambda: Option<usize> },
    DILower { degrees: Vec<usize>, r_max_x: Option<String>, r_max_y: Option<String>, eigen: bool },
    Quotient,
    Net { epsilon: String, mode: NetModeArg, packing: bool },
    Sep { point: Option<usize> },
    Formulas { op: FormulaOp, params: Vec<(String, String)> },
    Verify { suite: Suite, count: usize, max_points: usize, spheres: bool },
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub x: Option<SpaceSource>,
    pub y: Option<SpaceSource>,
    /// `hom` images pulling the action of Y back to the group of X.
    pub restrict_y: Option<Vec<usize>>,
    pub budgets: Budgets,
    /// Field characteristic, `0` for the rationals.
    pub p: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub verbosity: u8,
}

#[derive(Debug, Parser)]
#[command(name = "equigh", version, about = "Equivariant Gromov-Hausdorff distances and Vietoris-Rips persistence of finite G-metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// single input space (.json or .csv)
    #[arg(long, global = true)]
    space: Option<PathBuf>,
    #[arg(long, global = true)]
    space_x: Option<PathBuf>,
    #[arg(long, global = true)]
    space_y: Option<PathBuf>,
    /// generated input, `[x=|y=]kind[,key=value]*`
    #[arg(long, global = true, action = ArgAction::Append)]
    sample: Vec<String>,
    /// comma-separated images of the elements of X's group in Y's group
    #[arg(long, global = true)]
    restrict_y: Option<String>,
    /// pair-orbit cap for the exact solver
    #[arg(long, global = true, allow_negative_numbers = true)]
    budget: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    max_nodes: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    max_simplices: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    hom_order: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    hom_degree: Option<String>,
    /// coefficient field characteristic (0 = rationals)
    #[arg(long, global = true, allow_negative_numbers = true)]
    p: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    seed: Option<String>,
    #[arg(long, visible_alias = "report", global = true)]
    out: Option<PathBuf>,
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// equivariant Gromov-Hausdorff distance
    Gh {
        #[arg(long, conflicts_with_all = ["oracle", "bounds_only", "function_pair"])]
        exact: bool,
        #[arg(long, conflicts_with_all = ["bounds_only", "function_pair"])]
        oracle: bool,
        #[arg(long, conflicts_with = "function_pair")]
        bounds_only: bool,
        #[arg(long)]
        function_pair: bool,
        /// compare the quotient spaces instead
        #[arg(long)]
        quotients: bool,
    },
    /// barcodes of the Vietoris-Rips filtration
    Persist {
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        r_max: Option<String>,
        #[arg(long)]
        export_boundary: Option<PathBuf>,
    },
    /// eigenspace barcodes of one group element
    Eigen {
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        r_max: Option<String>,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long)]
        lambda: Option<usize>,
    },
    /// certified lower bounds on the equivariant interleaving distance
    #[command(name = "dI-lower")]
    DILower {
        #[arg(long, default_value = "0,1")]
        degrees: String,
        #[arg(long, allow_negative_numbers = true)]
        r_max_x: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        r_max_y: Option<String>,
        #[arg(long)]
        no_eigen: bool,
    },
    /// quotient metric space
    Quotient,
    /// G-invariant epsilon-net
    Net {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "greedy")]
        mode: NetModeArg,
        /// also check the covering/packing inequality
        #[arg(long)]
        packing: bool,
    },
    /// diameter, G-separation and displacements
    Sep {
        #[arg(long)]
        point: Option<usize>,
    },
    /// closed-form evaluators
    Formulas {
        #[arg(long, value_enum)]
        op: FormulaOp,
        /// `key=value,...`
        #[arg(long, default_value = "")]
        params: String,
    },
    /// worked-example suite or seeded random campaign
    Verify {
        #[arg(long, value_enum, default_value = "paper")]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long)]
        no_spheres: bool,
    },
    /// dump a generated space
    Sample,
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(flag: &str, text: &str) -> Result<T, CliError> {
    match text.trim().parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(bad(flag, format!("expected a positive integer, got `{text}`"))),
    }
}

fn budget<T: std::str::FromStr + PartialOrd + Default + Copy>(
    flag: &str,
    value: Option<&String>,
    env: &dyn Fn(&str) -> Option<String>,
    var: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = value {
        return positive(flag, v);
    }
    match env(var) {
        Some(v) => positive(var, &v),
        None => Ok(default),
    }
}

fn list(flag: &str, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| bad(flag, format!("`{s}` is not a nonnegative integer"))))
        .collect()
}

fn scale(flag: &str, text: Option<String>) -> Result<Option<String>, CliError> {
    match text {
        None => Ok(None),
        Some(t) => match <f64 as equigh::Scalar>::parse_text(&t) {
            Some(v) if v > 0.0f64 => Ok(Some(t)),
            _ => Err(bad(flag, format!("expected a positive number, got `{t}`"))),
        },
    }
}

fn params(text: &str) -> Result<Vec<(String, String)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| bad("--params", format!("`{kv}` is not key=value")))
        })
        .collect()
}

fn from_clap(e: clap::Error) -> CliError {
    let arg = || match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => s.clone(),
        Some(ContextValue::Strings(v)) => v.join(", "),
        _ => String::new(),
    };
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Help(e.to_string())
        }
        ErrorKind::UnknownArgument | ErrorKind::InvalidSubcommand => CliError::UnknownFlag(arg()),
        ErrorKind::MissingRequiredArgument | ErrorKind::MissingSubcommand => CliError::MissingInput(arg()),
        _ => {
            let flag = arg();
            let msg = e.render().to_string().lines().next().unwrap_or_default().to_string();
            CliError::BadValue { flag, msg }
        }
    }
}

/// Parses `argv` (including the program name) using the process environment.
pub fn parse_cli<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    parse_cli_with_env(argv, &|k| std::env::var(k).ok())
}

/// As [`parse_cli`], with `EQUIGH_BUDGET_*` looked up through `env`.
pub fn parse_cli_with_env<I, T>(argv: I, env: &dyn Fn(&str) -> Option<String>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(from_clap)?;
    let c = cli.common;
    let d = Budgets::default();
    let budgets = Budgets {
        pair_orbits: budget("--budget", c.budget.as_ref(), env, "EQUIGH_BUDGET_PAIR_ORBITS", d.pair_orbits)?,
        nodes: budget("--max-nodes", c.max_nodes.as_ref(), env, "EQUIGH_BUDGET_NODES", d.nodes)?,
        simplices: budget("--max-simplices", c.max_simplices.as_ref(), env, "EQUIGH_BUDGET_SIMPLICES", d.simplices)?,
        hom_group_order: budget("--hom-order", c.hom_order.as_ref(), env, "EQUIGH_BUDGET_HOM_ORDER", d.hom_group_order)?,
        hom_degree: budget("--hom-degree", c.hom_degree.as_ref(), env, "EQUIGH_BUDGET_HOM_DEGREE", d.hom_degree)?,
    };
    let p = match c.p {
        None => None,
        Some(t) => match t.trim().parse::<u64>() {
            Ok(p) if p == 0 || (is_prime(p) && p < (1 << 31)) => Some(p),
            _ => return Err(bad("--p", format!("expected 0 or a prime below 2^31, got `{t}`"))),
        },
    };
    let seed = match c.seed {
        None => None,
        Some(t) => Some(t.trim().parse::<u64>().map_err(|_| bad("--seed", format!("expected an unsigned integer, got `{t}`")))?),
    };

    let (mut x, mut y) = (c.space_x.map(SpaceSource::File), c.space_y.map(SpaceSource::File));
    if let Some(path) = c.space {
        if x.is_some() {
            return Err(bad("--space", "given together with --space-x"));
        }
        x = Some(SpaceSource::File(path));
    }
    for s in c.sample {
        let (slot, spec) = match s.split_once('=') {
            Some(("x", rest)) => (&mut x, rest),
            Some(("y", rest)) => (&mut y, rest),
            _ if x.is_none() => (&mut x, s.as_str()),
            _ => (&mut y, s.as_str()),
        };
        if slot.is_some() {
            return Err(bad("--sample", format!("input for `{spec}` already given")));
        }
        *slot = Some(SpaceSource::Sample(spec.to_string()));
    }
    let restrict_y = c.restrict_y.map(|t| list("--restrict-y", &t)).transpose()?;

    let command = match cli.command {
        Cmd::Gh { exact, oracle, bounds_only, function_pair, quotients } => {
            let mode = if exact {
                GhMode::Exact
            } else if oracle {
                GhMode::Oracle
            } else if bounds_only {
                GhMode::BoundsOnly
            } else if function_pair {
                GhMode::FunctionPair
            } else {
                GhMode::Auto
            };
            Command::Gh { mode, quotients }
        }
        Cmd::Persist { max_dim, degrees, r_max, export_boundary } => Command::Persist {
            max_dim,
            degrees: degrees.map(|t| list("--degrees", &t)).transpose()?,
            r_max: scale("--r-max", r_max)?,
            export_boundary,
        },
        Cmd::Eigen { max_dim, degrees, r_max, g, lambda } => Command::Eigen {
            max_dim,
            degrees: degrees.map(|t| list("--degrees", &t)).transpose()?,
            r_max: scale("--r-max", r_max)?,
            g,
            lambda,
        },
        Cmd::DILower { degrees, r_max_x, r_max_y, no_eigen } => Command::DILower {
            degrees: list("--degrees", &degrees)?,
            r_max_x: scale("--r-max-x", r_max_x)?,
            r_max_y: scale("--r-max-y", r_max_y)?,
            eigen: !no_eigen,
        },
        Cmd::Quotient => Command::Quotient,
        Cmd::Net { epsilon, mode, packing } => Command::Net {
            epsilon: scale("--epsilon", Some(epsilon))?.expect("given"),
            mode,
            packing,
        },
        Cmd::Sep { point } => Command::Sep { point },
        Cmd::Formulas { op, params: text } => Command::Formulas { op, params: params(&text)? },
        Cmd::Verify { suite, count, max_points, no_spheres } => Command::Verify { suite, count, max_points, spheres: !no_spheres },
        Cmd::Sample => Command::Sample,
    };

    let needs = match &command {
        Command::Gh { .. } | Command::DILower { .. } => 2,
        Command::Formulas { .. } | Command::Verify { .. } => 0,
        _ => 1,
    };
    if needs >= 1 && x.is_none() {
        return Err(CliError::MissingInput("--space, --space-x or --sample".into()));
    }
    if needs == 2 && y.is_none() {
        return Err(CliError::MissingInput("--space-y or --sample y=...".into()));
    }
    if needs < 2 && y.is_some() {
        return Err(bad("--space-y", "this command takes a single space"));
    }
    Ok(RunConfig { command, x, y, restrict_y, budgets, p, seed, out: c.out, verbosity: c.verbose })
}
