use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use eon_cli::network::{load_network, load_state, node};
use eon_cli::report::{explain, format_outcome};
use eon_cli::spec::ExperimentSpec;
use eon_cli::sweep::{run_sweep, write_sweep};
use eon_cli::{exit_code, EXIT_BLOCKED, EXIT_OK};
use eon_core::aco::SolverConfig;
use eon_core::baselines::KspConfig;
use eon_core::model::Request;
use eon_core::solvers::{Solver, SolverKind};

/// Routing, modulation and spectrum assignment experiments on elastic optical networks.
///
/// Every flag can also be set through an `EONSIM_` environment variable, e.g. `EONSIM_SEEDS`.
#[derive(Parser, Debug)]
#[command(name = "eonsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one request and print the chosen path, level and slot window.
    Solve(SolveArgs),
    /// Print the auxiliary graph, reduction statistics and the colony trace for one request.
    Explain(SolveArgs),
    /// Run dynamic-traffic simulations and write CSV results.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct NetworkArgs {
    /// Topology file, or `nsfnet` / `six-node` for the bundled networks.
    #[arg(long, env = "EONSIM_TOPOLOGY")]
    topology: Option<String>,
    /// Override the number of slots per link.
    #[arg(long, env = "EONSIM_SLOTS")]
    slots: Option<usize>,
}

#[derive(Args, Debug)]
struct ColonyArgs {
    /// Ant scaling parameter.
    #[arg(long, env = "EONSIM_Z")]
    z: Option<f64>,
    /// Pheromone evaporation rate.
    #[arg(long, env = "EONSIM_SIGMA")]
    sigma: Option<f64>,
    #[arg(long, env = "EONSIM_MAX_ITERS")]
    max_iters: Option<usize>,
    /// Fraction of ants that must agree on the best fitness to stop early.
    #[arg(long, env = "EONSIM_QUORUM")]
    quorum: Option<f64>,
    /// Candidate paths for the k-shortest-path baseline.
    #[arg(long, env = "EONSIM_K_PATHS")]
    k_paths: Option<usize>,
}

impl ColonyArgs {
    fn apply(&self, aco: &mut SolverConfig, ksp: &mut KspConfig) {
        if let Some(z) = self.z {
            aco.z = z;
        }
        if let Some(s) = self.sigma {
            aco.evaporation = s;
        }
        if let Some(m) = self.max_iters {
            aco.max_iterations = m;
        }
        if let Some(q) = self.quorum {
            aco.quorum = q;
        }
        if let Some(k) = self.k_paths {
            ksp.k_paths = k;
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Background occupancy file (`<node> <node> <ranges>` per line).
    #[arg(long, env = "EONSIM_OCCUPANCY")]
    occupancy: Option<PathBuf>,
    #[arg(long)]
    source: String,
    #[arg(long)]
    destination: String,
    /// Requested rate in Gbps.
    #[arg(long)]
    rate: f64,
    #[arg(long, env = "EONSIM_SOLVER", default_value = "a3g")]
    solver: SolverKind,
    #[arg(long, env = "EONSIM_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    colony: ColonyArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Experiment spec (TOML); flags override its fields.
    #[arg(long, env = "EONSIM_SPEC")]
    spec: Option<PathBuf>,
    #[command(flatten)]
    network: NetworkArgs,
    /// Comma separated solvers.
    #[arg(long, env = "EONSIM_SOLVER", value_delimiter = ',')]
    solver: Vec<SolverKind>,
    /// Comma separated network-wide arrival rates.
    #[arg(long, env = "EONSIM_LAMBDA", value_delimiter = ',')]
    lambda: Vec<f64>,
    /// Mean holding time, or `inf`.
    #[arg(long, env = "EONSIM_HOLD")]
    hold: Option<f64>,
    /// Seeds as `a..b` (exclusive) or a comma separated list.
    #[arg(long, env = "EONSIM_SEEDS")]
    seeds: Option<String>,
    /// Arrivals per run.
    #[arg(long, env = "EONSIM_REQUESTS")]
    requests: Option<usize>,
    /// Stop each run once this much load is admitted (Gbps).
    #[arg(long, env = "EONSIM_LOAD_TARGET")]
    load_target: Option<f64>,
    /// Checkpoint spacing in Gbps.
    #[arg(long, env = "EONSIM_CHECKPOINT")]
    checkpoint: Option<f64>,
    #[command(flatten)]
    colony: ColonyArgs,
    #[arg(long, env = "EONSIM_OUT")]
    out: Option<PathBuf>,
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = text.split_once("..") {
        return Ok((a.trim().parse()?..b.trim().parse()?).collect());
    }
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Ok(s.parse()?))
        .collect()
}

fn solve(args: &SolveArgs, explain_only: bool) -> Result<u8> {
    let Some(topology) = &args.network.topology else { bail!(eon_core::Error::Config("--topology is required".into())) };
    let net = load_network(topology, args.network.slots)?;
    let state = load_state(&net, args.occupancy.as_deref())?;
    let request = Request::permanent(0, node(&net, &args.source)?, node(&net, &args.destination)?, args.rate)?;
    let mut solver = Solver::new(args.solver);
    args.colony.apply(&mut solver.aco, &mut solver.ksp);
    solver.validate()?;
    if explain_only {
        print!("{}", explain(&net, &state, &request, &solver, args.seed));
        return Ok(EXIT_OK);
    }
    let outcome = solver.solve(&state, &request, &net.modulation, args.seed)?;
    if let Some(alloc) = outcome.allocation() {
        eon_core::model::validate_allocation(&state, &net.modulation, &request, alloc)?;
    }
    print!("{}", format_outcome(&net, &solver, &outcome));
    Ok(if outcome.allocation().is_some() { EXIT_OK } else { EXIT_BLOCKED })
}

fn sweep(args: &SweepArgs) -> Result<u8> {
    let mut spec = match (&args.spec, &args.network.topology) {
        (Some(path), _) => ExperimentSpec::load(path)?,
        (None, Some(topology)) => ExperimentSpec::new(topology.clone()),
        (None, None) => bail!(eon_core::Error::Config("either --spec or --topology is required".into())),
    };
    if let (Some(_), Some(t)) = (&args.spec, &args.network.topology) {
        spec.topology = t.clone();
    }
    if args.network.slots.is_some() {
        spec.slots = args.network.slots;
    }
    if !args.solver.is_empty() {
        spec.solvers = args.solver.clone();
    }
    if !args.lambda.is_empty() {
        spec.lambdas = args.lambda.clone();
    }
    if let Some(h) = args.hold {
        spec.traffic.mean_hold_time = h;
    }
    if let Some(s) = &args.seeds {
        spec.seeds = parse_seeds(s).map_err(|e| eon_core::Error::Config(format!("bad --seeds: {e}")))?;
    }
    if args.requests.is_some() {
        spec.traffic.requests = args.requests;
    }
    if args.load_target.is_some() {
        spec.simulation.load_target_gbps = args.load_target;
    }
    if let Some(c) = args.checkpoint {
        spec.simulation.checkpoint_gbps = c;
    }
    args.colony.apply(&mut spec.aco, &mut spec.ksp);
    if let Some(out) = &args.out {
        spec.out = out.clone();
    }
    let runs = run_sweep(&spec)?;
    write_sweep(&spec.out, &runs)?;
    let failed = runs.iter().filter(|r| r.outcome.is_err()).count();
    eprintln!("{} runs, {failed} failed, results in {}", runs.len(), spec.out.display());
    Ok(if failed > 0 { eon_cli::EXIT_CONTRACT } else { EXIT_OK })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a, false),
        Command::Explain(a) => solve(a, true),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
