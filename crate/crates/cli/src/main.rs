use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clearance_client::Client;
use clearance_core::engine::{EngineConfig, Execution, Fault, SceneIndex};
use clearance_core::generate::{box_for, generate_scene};
use clearance_core::harness::bench::{run_bench, BenchConfig, BenchRecord};
use clearance_core::harness::check::{run_checks, CheckConfig};
use clearance_core::io::{read_path, read_scene, scene_to_json};
use clearance_core::{PolyPath, TPolicy};
use tracing_subscriber::EnvFilter;

/// Path clearance queries among polygonal obstacles.
#[derive(Parser)]
#[command(name = "clearance", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scene, build its index and print build statistics.
    Build {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Check a path against a clearance; prints the report as JSON.
    Query(QueryArgs),
    /// Time queries over scene size and budget; CSV on stdout.
    Bench(BenchArgs),
    /// Randomized oracle-equivalence suites; exit 1 on any failure.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Trials per suite.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Run against a deliberately broken engine (drops the slab term).
        #[arg(long)]
        inject_fault: bool,
    },
    /// Write a random scene as JSON.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of polygons.
        #[arg(long)]
        m: usize,
        /// Total vertex count (at least 3m).
        #[arg(long)]
        n: usize,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the scene over HTTP until interrupted.
    Serve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Args)]
struct Budget {
    /// Space budget: `n`, `n^<exp>`, `n2cap:<bytes>` or a literal t.
    #[arg(long, default_value = "n^1.5")]
    t_policy: TPolicy,
}

#[derive(Args)]
struct QueryArgs {
    /// Scene file; not needed with --server.
    #[arg(long, required_unless_present = "server")]
    scene: Option<PathBuf>,
    #[arg(long)]
    path: PathBuf,
    /// Clearance; overrides the path file's `c`.
    #[arg(long)]
    c: Option<f64>,
    #[command(flatten)]
    budget: Budget,
    /// Evaluate segments on all cores.
    #[arg(long)]
    parallel: bool,
    /// Ask a running service (e.g. http://127.0.0.1:8080) instead of
    /// building an index locally.
    #[arg(long)]
    server: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// Seeds, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
    seed: Vec<u64>,
    /// Scene sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
    n: Vec<usize>,
    /// Budget policies, comma separated.
    #[arg(long, value_delimiter = ',', default_values = ["n", "n^1.25", "n^1.5", "n2cap:67108864"])]
    t_policy: Vec<TPolicy>,
    /// Segments per path.
    #[arg(long, default_value_t = 16)]
    k: usize,
    /// Timed paths per index configuration.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Timed paths for the brute-force baseline.
    #[arg(long, default_value_t = 50)]
    brute_trials: usize,
    /// Shorthand for one seed, n = 1000 and few paths.
    #[arg(long)]
    smoke: bool,
}

/// Exit 2: the input was rejected. Exit 1: anything else went wrong.
enum Failure {
    Input(String),
    Runtime(String),
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_env("CLEARANCE_LOG").unwrap_or_else(|_| EnvFilter::new("warn")),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Build { scene, budget } => {
            let index = build_index(&scene, budget.t_policy)?;
            println!(
                "{}",
                serde_json::to_string_pretty(index.stats()).map_err(runtime)?
            );
        }
        Command::Query(args) => query(args)?,
        Command::Bench(args) => bench(args)?,
        Command::Check {
            seed,
            trials,
            inject_fault,
        } => {
            let report = run_checks(&CheckConfig {
                seed,
                trials,
                fault: inject_fault.then_some(Fault::SkipSlabTerm),
            });
            print!("{report}");
            if !report.ok() {
                println!("FAILED: {} trials", report.failed());
                return Ok(ExitCode::from(1));
            }
            println!("all suites passed");
        }
        Command::Generate { seed, m, n, out } => {
            let scene = generate_scene(seed, m, n, box_for(n)).map_err(input)?;
            let json = scene_to_json(&scene) + "\n";
            match out {
                Some(file) => std::fs::write(&file, json).map_err(runtime)?,
                None => print!("{json}"),
            }
        }
        Command::Serve {
            scene,
            bind,
            budget,
        } => {
            let index = build_index(&scene, budget.t_policy)?;
            let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(&bind).await.map_err(input)?;
                // the bound address goes to stdout so callers can use port 0
                println!("listening on {}", listener.local_addr().map_err(runtime)?);
                std::io::stdout().flush().map_err(runtime)?;
                clearance_service::serve(listener, index)
                    .await
                    .map_err(runtime)
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn build_index(scene: &PathBuf, policy: TPolicy) -> Result<SceneIndex, Failure> {
    let scene = read_scene(scene).map_err(input)?;
    let config = EngineConfig {
        t_policy: policy,
        ..EngineConfig::default()
    };
    SceneIndex::build(scene, config).map_err(input)
}

fn query(args: QueryArgs) -> Result<(), Failure> {
    let file = read_path(&args.path).map_err(input)?;
    let c = args
        .c
        .or(file.c)
        .ok_or_else(|| input("no clearance given: pass --c or set \"c\" in the path file"))?;
    let json = match (&args.server, &args.scene) {
        (Some(url), _) => {
            let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
            rt.block_on(Client::new(url.clone()).query_text(&file.vertices, c))
                .map_err(|e| match e {
                    clearance_client::ClientError::Api { .. } => input(e),
                    other => runtime(other),
                })?
        }
        (None, Some(scene)) => {
            let mut index = build_index(scene, args.budget.t_policy)?;
            if args.parallel {
                index = index.with_execution(Execution::Parallel, index.config().mode);
            }
            let path = PolyPath::new(file.vertices).map_err(input)?;
            let report = index.path_clearance(&path, c).map_err(input)?;
            serde_json::to_string(&report).map_err(runtime)?
        }
        (None, None) => return Err(input("--scene is required without --server")),
    };
    println!("{json}");
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let config = if args.smoke {
        BenchConfig::smoke()
    } else {
        BenchConfig {
            seeds: args.seed,
            ns: args.n,
            policies: args.t_policy,
            k: args.k,
            paths: args.trials,
            brute_paths: args.brute_trials.min(args.trials),
        }
    };
    let stdout = std::io::stdout();
    let mut out = csv::Writer::from_writer(stdout.lock());
    let mut failed = None;
    run_bench(&config, |r: &BenchRecord| {
        tracing::info!(n = r.n, structure = %r.structure, policy = %r.t_policy, "bench row");
        if failed.is_none() {
            failed = out
                .serialize(r)
                .and_then(|_| out.flush().map_err(Into::into))
                .err();
        }
    })
    .map_err(input)?;
    match failed {
        Some(e) => Err(runtime(e)),
        None => Ok(()),
    }
}
