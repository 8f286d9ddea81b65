//! Command-line front end: allocate over claims files and basin graphs,
//! sweep and threshold the geometric family, run axiom checks, and replay
//! the embedded case study against its published values.
//!
//! Exit codes: 0 on success, 1 when a check or reproduction fails on the
//! merits (an axiom violation, a mismatched cell), 2 on usage and
//! validation errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use riparian::analysis::{
    argmax_gamma_per_agent, min_gamma_claims_bounded, min_lambda_claims_bounded, sweep_gamma,
    uniform_grid, Family, ThresholdResult, DEFAULT_THRESHOLD_TOL,
};
use riparian::axioms::{check_axiom, Axiom, AxiomReport, CheckConfig, RuleSpec, Verdict};
use riparian::basin::basin_geometric;
use riparian::problem::Problem;
use riparian::quantity::{Quantity, Rational};
use riparian::rules::{GammaFunction, GammaParam, LambdaParam};

mod io;
mod render;
mod reproduce;

use render::Format;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable files, or inputs that break an invariant.
    #[error("{0}")]
    Usage(String),
    /// The command ran but the result is a failure: a violated axiom or a
    /// reproduction mismatch.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

pub fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

#[derive(Parser)]
#[command(
    name = "riparian-cli",
    version,
    about = "Pollution-permit allocation along rivers: rules, axiom checks, thresholds"
)]
struct Cli {
    /// Write the embedded datasets (claims CSVs, basin JSONs) into DIR and exit.
    #[arg(long, value_name = "DIR")]
    dump_data: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Divide a budget among claimants on a chain or a basin graph.
    Allocate(AllocateArgs),
    /// Trace geometric awards over a γ grid and report per-agent argmax.
    Sweep(SweepArgs),
    /// Smallest parameter that keeps every award within its claim.
    Threshold(ThresholdArgs),
    /// Check axioms against a rule by seeded sampling.
    Axioms(AxiomsArgs),
    /// Recompute the embedded case study and diff against published values.
    Reproduce(reproduce::ReproduceArgs),
}

#[derive(clap::Args)]
struct AllocateArgs {
    /// Claims CSV with header `agent,claim`, ordered source to mouth.
    #[arg(long, value_name = "FILE", conflicts_with = "basin", required_unless_present = "basin")]
    claims: Option<PathBuf>,

    /// Basin JSON with `nodes`, `edges`, and `budget`.
    #[arg(long, value_name = "FILE")]
    basin: Option<PathBuf>,

    /// Amount to divide. Required with --claims; overrides the file's budget with --basin.
    #[arg(long, value_name = "X")]
    budget: Option<String>,

    /// One of: prop, ft, geometric, averaging, gengeo.
    #[arg(long, value_name = "RULE")]
    rule: String,

    /// Retention parameter in [0, 1]; geometric runs only.
    #[arg(long, value_name = "G")]
    gamma: Option<String>,

    /// Mixing weight in [0, 1]; averaging runs only.
    #[arg(long, value_name = "L")]
    lambda: Option<String>,

    /// Transfer function (linear:S | cap:A | pwl:t:y,...); gengeo runs only.
    #[arg(long, value_name = "SPEC")]
    gamma_fn: Option<String>,

    /// Exact rational arithmetic; values print as reduced fractions.
    #[arg(long)]
    exact: bool,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Claims CSV with header `agent,claim`, ordered source to mouth.
    #[arg(long, value_name = "FILE")]
    claims: PathBuf,

    /// Amount to divide.
    #[arg(long, value_name = "X")]
    budget: String,

    /// Grid size over [0, 1]; at least 2.
    #[arg(long, value_name = "N")]
    points: usize,

    /// Destination for the award-path CSV.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct ThresholdArgs {
    /// Claims CSV with header `agent,claim`, ordered source to mouth.
    #[arg(long, value_name = "FILE")]
    claims: PathBuf,

    /// Amount to divide.
    #[arg(long, value_name = "X")]
    budget: String,

    /// Parameter family to bound.
    #[arg(long, value_enum)]
    family: FamilyArg,

    /// Bisection tolerance for the geometric search.
    #[arg(long, value_name = "T", default_value_t = DEFAULT_THRESHOLD_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FamilyArg {
    Geometric,
    Averaging,
}

#[derive(clap::Args)]
struct AxiomsArgs {
    /// Rule spec: prop | ft | geometric:G | averaging:L | gengeo:SPEC.
    #[arg(long, value_name = "SPEC")]
    rule: String,

    /// Axiom to check by name; see --all for the full battery.
    #[arg(long, value_name = "NAME", conflicts_with = "all")]
    axiom: Option<String>,

    /// Check every axiom, the heuristic continuity probe included.
    #[arg(long)]
    all: bool,

    /// Sampling seed. RIPARIAN_SEED overrides this default.
    #[arg(long, value_name = "S", env = "RIPARIAN_SEED", default_value_t = 7)]
    seed: u64,

    /// Instances drawn per axiom.
    #[arg(long, value_name = "K", default_value_t = 500)]
    samples: usize,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(dir) = &cli.dump_data {
        if cli.command.is_some() {
            return Err(usage("--dump-data runs on its own, without a subcommand"));
        }
        return io::dump_data(dir);
    }
    match cli.command {
        None => Err(usage(
            "pass a subcommand (allocate, sweep, threshold, axioms, reproduce) \
             or --dump-data DIR; see --help",
        )),
        Some(Command::Allocate(args)) => cmd_allocate(&args),
        Some(Command::Sweep(args)) => cmd_sweep(&args),
        Some(Command::Threshold(args)) => cmd_threshold(&args),
        Some(Command::Axioms(args)) => cmd_axioms(&args),
        Some(Command::Reproduce(args)) => reproduce::run(&args),
    }
}

/// Parse a decimal flag value into the active backend.
fn parse_quantity<Q: Quantity>(flag: &str, text: &str) -> Result<Q, CliError> {
    Q::from_decimal_str(text).map_err(|e| usage(format!("{flag}: {e}")))
}

/// Combine the rule token with its parameter flags, rejecting mismatches.
fn build_rule<Q: Quantity>(args: &AllocateArgs) -> Result<RuleSpec<Q>, CliError> {
    let gamma = args.gamma.as_deref();
    let lambda = args.lambda.as_deref();
    let gamma_fn = args.gamma_fn.as_deref();
    let forbid = |flag: Option<&str>, name: &str, rule: &str| -> Result<(), CliError> {
        match flag {
            Some(_) => Err(usage(format!("{name} does not apply to the {rule} rule"))),
            None => Ok(()),
        }
    };
    match args.rule.as_str() {
        "prop" | "proportional" => {
            forbid(gamma, "--gamma", "proportional")?;
            forbid(lambda, "--lambda", "proportional")?;
            forbid(gamma_fn, "--gamma-fn", "proportional")?;
            Ok(RuleSpec::Proportional)
        }
        "ft" | "full-transfer" => {
            forbid(gamma, "--gamma", "full-transfer")?;
            forbid(lambda, "--lambda", "full-transfer")?;
            forbid(gamma_fn, "--gamma-fn", "full-transfer")?;
            Ok(RuleSpec::FullTransfer)
        }
        "geometric" | "geo" => {
            forbid(lambda, "--lambda", "geometric")?;
            forbid(gamma_fn, "--gamma-fn", "geometric")?;
            let text = gamma.ok_or_else(|| usage("the geometric rule needs --gamma G"))?;
            let value = parse_quantity::<Q>("--gamma", text)?;
            Ok(RuleSpec::Geometric(
                GammaParam::new(value).map_err(|e| usage(format!("--gamma: {e}")))?,
            ))
        }
        "averaging" | "avg" => {
            forbid(gamma, "--gamma", "averaging")?;
            forbid(gamma_fn, "--gamma-fn", "averaging")?;
            let text = lambda.ok_or_else(|| usage("the averaging rule needs --lambda L"))?;
            let value = parse_quantity::<Q>("--lambda", text)?;
            Ok(RuleSpec::Averaging(
                LambdaParam::new(value).map_err(|e| usage(format!("--lambda: {e}")))?,
            ))
        }
        "gengeo" => {
            forbid(gamma, "--gamma", "gengeo")?;
            forbid(lambda, "--lambda", "gengeo")?;
            let spec = gamma_fn.ok_or_else(|| usage("the gengeo rule needs --gamma-fn SPEC"))?;
            Ok(RuleSpec::GeneralizedGeometric(
                GammaFunction::from_spec(spec).map_err(|e| usage(format!("--gamma-fn: {e}")))?,
            ))
        }
        other if other.contains(':') => Err(usage(
            "allocate takes the parameter as its own flag (--gamma, --lambda, or --gamma-fn); \
             the colon form belongs to the axioms command",
        )),
        other => Err(usage(format!(
            "unknown rule `{other}`; expected prop, ft, geometric, averaging, or gengeo"
        ))),
    }
}

fn cmd_allocate(args: &AllocateArgs) -> Result<(), CliError> {
    if args.exact {
        allocate_with::<Rational>(args)
    } else {
        allocate_with::<f64>(args)
    }
}

fn allocate_with<Q: Quantity>(args: &AllocateArgs) -> Result<(), CliError> {
    let rule = build_rule::<Q>(args)?;
    if let Some(path) = &args.basin {
        let RuleSpec::Geometric(gamma) = &rule else {
            return Err(usage(
                "a basin allocates with the geometric family; pass --rule geometric --gamma G",
            ));
        };
        let mut graph = io::read_basin::<Q>(path)?;
        if let Some(text) = &args.budget {
            let budget = parse_quantity::<Q>("--budget", text)?;
            graph = graph
                .with_budget(budget)
                .map_err(|e| usage(format!("--budget: {e}")))?;
        }
        let result = basin_geometric(&graph, gamma);
        print!(
            "{}",
            render::basin_allocation(&graph, &result, &rule.to_string(), args.exact, args.format)
        );
        Ok(())
    } else {
        let path = args.claims.as_ref().expect("clap enforces --claims or --basin");
        let file = io::read_claims(path)?;
        let budget_text = args
            .budget
            .as_ref()
            .ok_or_else(|| usage("--budget is required with --claims"))?;
        let problem = build_problem::<Q>(&file, budget_text)?;
        let alloc = rule.apply(&problem).map_err(|e| usage(e.to_string()))?;
        print!(
            "{}",
            render::allocation(
                &file.agents,
                &problem,
                alloc.awards(),
                &rule.to_string(),
                args.exact,
                args.format,
            )
        );
        Ok(())
    }
}

/// Parse the file's claim strings and the budget flag into a validated problem.
fn build_problem<Q: Quantity>(file: &io::ClaimsFile, budget: &str) -> Result<Problem<Q>, CliError> {
    let claims = file
        .claims
        .iter()
        .map(|text| parse_quantity::<Q>("claim", text))
        .collect::<Result<Vec<_>, _>>()?;
    let budget = parse_quantity::<Q>("--budget", budget)?;
    Problem::new(claims, budget).map_err(|e| usage(e.to_string()))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.points < 2 {
        return Err(usage("--points must be at least 2 (the grid needs both endpoints)"));
    }
    let file = io::read_claims(&args.claims)?;
    let problem = build_problem::<f64>(&file, &args.budget)?;
    let grid = uniform_grid::<f64>(args.points);
    let sweep = sweep_gamma(&problem, &grid).map_err(|e| usage(e.to_string()))?;
    let csv = render::sweep_csv(&file.agents, &sweep);
    std::fs::write(&args.out, csv)
        .map_err(|e| usage(format!("{}: {e}", args.out.display())))?;
    println!(
        "wrote {} ({} grid points, {} agents)",
        args.out.display(),
        sweep.grid.len(),
        file.agents.len()
    );
    println!("per-agent argmax gamma:");
    let argmax = argmax_gamma_per_agent(&problem, DEFAULT_THRESHOLD_TOL);
    for (agent, best) in file.agents.iter().zip(argmax) {
        println!("  {agent}: {best:.3}");
    }
    Ok(())
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<(), CliError> {
    let file = io::read_claims(&args.claims)?;
    let problem = build_problem::<f64>(&file, &args.budget)?;
    let result = match args.family {
        FamilyArg::Geometric => {
            if !(args.tol.is_finite() && args.tol > 0.0) {
                return Err(usage("--tol must be a positive number"));
            }
            min_gamma_claims_bounded(&problem, args.tol)
        }
        FamilyArg::Averaging => min_lambda_claims_bounded(&problem),
    };
    print!("{}", render_threshold(&result, &file.agents));
    Ok(())
}

fn render_threshold(result: &ThresholdResult, agents: &[String]) -> String {
    let mut out = String::new();
    let parameter = match result.family {
        Family::Geometric => "gamma",
        Family::Averaging => "lambda",
    };
    out.push_str(&format!("family: {}\n", result.family));
    out.push_str(&format!(
        "smallest claims-bounded {parameter}: {:.6} (tol {})\n",
        result.threshold, result.tol
    ));
    match result.binding_agent {
        Some(i) => out.push_str(&format!(
            "binding agent: {} (position {})\n",
            agents.get(i).map(String::as_str).unwrap_or("?"),
            i + 1
        )),
        None => out.push_str("binding agent: none (every parameter value is claims-bounded)\n"),
    }
    let intervals = result
        .feasible_intervals
        .iter()
        .map(|(lo, hi)| format!("[{lo:.3}, {hi:.3}]"))
        .collect::<Vec<_>>()
        .join(" ∪ ");
    out.push_str(&format!(
        "feasible intervals (coarse scan; the threshold refines the boundary): {intervals}\n"
    ));
    if let Some(path) = result.formula_path {
        out.push_str(&format!("via: {path}\n"));
    }
    if let Some(warning) = &result.warning {
        out.push_str(&format!("warning: {warning}\n"));
    }
    out
}

fn cmd_axioms(args: &AxiomsArgs) -> Result<(), CliError> {
    let rule = RuleSpec::<Rational>::parse(&args.rule).map_err(|e| usage(e.to_string()))?;
    let axioms: Vec<Axiom> = if args.all {
        Axiom::all().to_vec()
    } else {
        match &args.axiom {
            None => return Err(usage("pass --axiom NAME or --all")),
            Some(name) => match Axiom::from_name(name) {
                Some(axiom) => vec![axiom],
                None => {
                    let known = Axiom::all()
                        .iter()
                        .map(|a| a.name())
                        .collect::<Vec<_>>()
                        .join(", ");
                    return Err(usage(format!("unknown axiom `{name}`; available: {known}")));
                }
            },
        }
    };
    let config = CheckConfig {
        seed: args.seed,
        samples: args.samples,
        ..CheckConfig::default()
    };
    let reports: Vec<AxiomReport> = axioms
        .iter()
        .map(|&axiom| check_axiom(&rule, axiom, &config))
        .collect();

    match args.format {
        Format::Json => print!("{}", render::reports_json(&reports)),
        Format::Table => {
            for report in &reports {
                print!("{}", render_axiom_report(report));
            }
        }
        Format::Csv => return Err(usage("axioms prints table or json; there is no csv form")),
    }

    let violated = reports.iter().filter(|r| r.verdict == Verdict::Violated).count();
    if violated > 0 {
        Err(CliError::Failure(format!(
            "{violated} of {} axiom checks violated",
            reports.len()
        )))
    } else {
        Ok(())
    }
}

fn render_axiom_report(report: &AxiomReport) -> String {
    let mut out = String::new();
    let tag = if report.heuristic { " [heuristic probe]" } else { "" };
    out.push_str(&format!(
        "{} vs {} — {}{} ({} instances, {} skipped, seed {})\n",
        report.axiom.name(),
        report.rule,
        report.verdict.as_str(),
        tag,
        report.sample_size,
        report.skipped,
        report.seed
    ));
    if let Some(cex) = &report.counterexample {
        out.push_str(&format!("  counterexample: {}\n", cex.context));
        out.push_str(&format!(
            "  agent {}: lhs {}, rhs {}, diff {}\n",
            cex.agent + 1,
            cex.lhs,
            cex.rhs,
            cex.diff
        ));
        out.push_str(&format!("  instance: {}\n", cex.instance));
    }
    out
}
