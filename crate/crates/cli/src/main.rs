use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use setseq::constructors::{
    add_pendants, four_copies, label_large_caterpillar, label_small_diameter_with, ConstructError,
    Fixtures, PendantPlan, MAX_SMALL_DIAMETER,
};
use setseq::pairing::sweep::{sweep_shard, SweepReport, MAX_SWEEP_DIM};
use setseq::pairing::{
    solve_pairing_with, solve_with_route, PairingError, PairingInstance, RouteTag, SolveOptions,
};
use setseq::search::{
    search_labeling, SearchConfig, SearchError, Strategy, EXHAUSTIVE_MAX_VERTICES,
};
use setseq::trees::{
    build_caterpillar, to_dot, CaterpillarSpec, LabeledTree, Tree, TreeDocument, TreeError,
};

#[derive(Parser)]
#[command(
    name = "setseq",
    version,
    about = "Set-sequential labelings of trees over F_2^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition F_2^n into pairs with prescribed sums.
    PairSolve {
        #[arg(long)]
        n: u32,
        /// Comma-separated bitstrings of width n.
        #[arg(long)]
        targets: String,
        #[arg(long, value_enum, default_value_t = Route::Auto)]
        route: Route,
        #[arg(long, value_parser = humantime::parse_duration, default_value = "60s")]
        budget: Duration,
    },
    /// Label a caterpillar or a tree document.
    Label {
        #[arg(long, required_unless_present = "tree", conflicts_with = "tree")]
        caterpillar: Option<CaterpillarSpec>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = humantime::parse_duration, default_value = "60s")]
        budget: Duration,
    },
    /// Check a labeled tree document.
    Verify { path: PathBuf },
    /// Build a labeled tree from a labeled base.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Search for a labeling of a tree document.
    Search {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = humantime::parse_duration, default_value = "60s")]
        budget: Duration,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Print a labeled tree as Graphviz DOT.
    Export {
        #[arg(long)]
        dot: PathBuf,
    },
    /// Exhaustively pair every target multiset of a small dimension.
    Sweep {
        #[arg(long, required = true)]
        conjecture2: bool,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        shards: Option<usize>,
        /// Run only this shard (0-based); all shards run otherwise.
        #[arg(long, requires = "shards")]
        shard: Option<usize>,
        #[arg(long, value_parser = humantime::parse_duration, default_value = "60s")]
        budget: Duration,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Double the tree by attaching pendants to anchors.
    Pendants {
        #[arg(long)]
        base: PathBuf,
        /// `id:count,...`
        #[arg(long)]
        plan: PendantPlan,
    },
    /// Join four copies of the tree through the leaves u and v.
    FourCopies {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Auto,
    Exact,
    Dim5,
    Dim6Even,
    NValues,
    DimHalf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    SmallDiameter,
    Large,
    Search,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Exhaustive,
}

/// A domain error: a stable name plus a human message.
struct Failure {
    name: &'static str,
    message: String,
}

impl Failure {
    fn new(name: &'static str, message: impl fmt::Display) -> Self {
        Failure {
            name,
            message: message.to_string(),
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.name(), &e)
            }
        }
    )*};
}

failure_from!(PairingError, ConstructError, SearchError, TreeError);

type Outcome = Result<(), Failure>;

fn read_document(path: &Path) -> Result<TreeDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new("Io", format!("{}: {e}", path.display())))?;
    Ok(TreeDocument::from_json(&text)?)
}

fn read_labeled(path: &Path) -> Result<LabeledTree, Failure> {
    Ok(read_document(path)?.labeled()?)
}

fn emit(lt: &LabeledTree) {
    println!("{}", TreeDocument::from_labeled(lt).to_json());
}

fn pair_solve(n: u32, targets: &str, route: Route, budget: Duration) -> Outcome {
    let inst = PairingInstance::parse(n, targets)?;
    let opts = SolveOptions { budget };
    let tag = match route {
        Route::Auto => None,
        Route::Exact => Some(RouteTag::ExactSearch),
        Route::Dim5 => Some(RouteTag::Dim5Coset),
        Route::Dim6Even => Some(RouteTag::Dim6EvenCoset),
        Route::NValues => Some(RouteTag::AtMostNValues),
        Route::DimHalf => Some(RouteTag::DimHalfEven),
    };
    let (partition, route) = match tag {
        None => solve_pairing_with(&inst, &opts)?,
        Some(tag) => solve_with_route(&inst, tag, &opts)?,
    };
    for line in partition.to_lines() {
        println!("{line}");
    }
    println!("route={}", route.tag);
    Ok(())
}

fn search_config(seed: u64, budget: Duration, strategy: Strategy, workers: usize) -> SearchConfig {
    SearchConfig {
        seed,
        budget,
        strategy,
        workers,
        progress: true,
        ..SearchConfig::default()
    }
}

fn search_tree(tree: Tree, cfg: &SearchConfig) -> Result<LabeledTree, Failure> {
    let lab = search_labeling(&tree, cfg)?;
    Ok(LabeledTree::new(tree, lab)?)
}

/// Small trees get the complete search, which also settles infeasibility.
fn search_any(tree: Tree, seed: u64, budget: Duration) -> Result<LabeledTree, Failure> {
    let strategy = if tree.vertex_count() <= EXHAUSTIVE_MAX_VERTICES {
        Strategy::Backtracking
    } else {
        Strategy::GreedyRestart
    };
    search_tree(tree, &search_config(seed, budget, strategy, 1))
}

fn label(
    caterpillar: Option<CaterpillarSpec>,
    tree: Option<PathBuf>,
    method: Method,
    seed: u64,
    budget: Duration,
) -> Outcome {
    let Some(spec) = caterpillar else {
        let path = tree.expect("clap requires --caterpillar or --tree");
        if !matches!(method, Method::Auto | Method::Search) {
            return Err(Failure::new(
                "MethodNeedsCaterpillar",
                "small-diameter and large methods need --caterpillar",
            ));
        }
        emit(&search_any(read_document(&path)?.tree()?, seed, budget)?);
        return Ok(());
    };
    let constructive = spec.all_odd() && spec.vertex_count().is_power_of_two();
    let method = match method {
        Method::Auto if !constructive => Method::Search,
        Method::Auto if spec.diameter() <= MAX_SMALL_DIAMETER => Method::SmallDiameter,
        Method::Auto => Method::Large,
        m => m,
    };
    let lt = match method {
        Method::SmallDiameter => label_small_diameter_with(&spec, &Fixtures::from_env())?.labeled,
        Method::Large => label_large_caterpillar(&spec)?,
        _ => search_any(build_caterpillar(&spec), seed, budget)?,
    };
    emit(&lt);
    Ok(())
}

fn verify(path: &Path) -> Outcome {
    let report = read_labeled(path)?.verify();
    if report.valid {
        println!("valid");
        return Ok(());
    }
    for v in &report.violations {
        println!("{v}");
    }
    Err(Failure::new(
        "NotSetSequential",
        format!("{} violations", report.violations.len()),
    ))
}

fn sweep(n: u32, shards: Option<usize>, shard: Option<usize>, budget: Duration) -> Outcome {
    if !(2..=MAX_SWEEP_DIM).contains(&n) {
        return Err(Failure::new(
            "Unsupported",
            format!("sweep supports 2 <= n <= {MAX_SWEEP_DIM}"),
        ));
    }
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get());
    let shards = shards.unwrap_or(threads).max(1);
    let mine: Vec<usize> = match shard {
        Some(i) if i >= shards => {
            return Err(Failure::new(
                "Unsupported",
                format!("shard {i} of {shards}"),
            ));
        }
        Some(i) => vec![i],
        None => (0..shards).collect(),
    };
    let reports: Vec<SweepReport> = std::thread::scope(|s| {
        let handles: Vec<_> = mine
            .iter()
            .map(|&i| s.spawn(move || sweep_shard(n, shards, i, budget)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep shard"))
            .collect()
    });
    let mut failures = 0;
    for r in &reports {
        println!(
            "shard={}/{} instances={} failures={} elapsed_ms={}",
            r.shard,
            r.shards,
            r.instances,
            r.failures.len(),
            r.elapsed.as_millis()
        );
        for f in &r.failures {
            let text: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            println!("failure={}", text.join(","));
        }
        failures += r.failures.len();
    }
    let instances: u64 = reports.iter().map(|r| r.instances).sum();
    println!("n={n} instances={instances} failures={failures}");
    if failures > 0 {
        return Err(Failure::new(
            "SweepFailures",
            format!("{failures} instances failed"),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::PairSolve {
            n,
            targets,
            route,
            budget,
        } => pair_solve(n, &targets, route, budget),
        Command::Label {
            caterpillar,
            tree,
            method,
            seed,
            budget,
        } => label(caterpillar, tree, method, seed, budget),
        Command::Verify { path } => verify(&path),
        Command::Construct { kind } => {
            let lt = match kind {
                Construct::Pendants { base, plan } => add_pendants(&read_labeled(&base)?, &plan)?,
                Construct::FourCopies { base, u, v } => four_copies(&read_labeled(&base)?, u, v)?,
            };
            emit(&lt);
            Ok(())
        }
        Command::Search {
            tree,
            seed,
            budget,
            strategy,
            workers,
        } => {
            let strategy = match strategy {
                StrategyArg::Greedy => Strategy::GreedyRestart,
                StrategyArg::Exhaustive => Strategy::Backtracking,
            };
            let cfg = search_config(seed, budget, strategy, workers);
            emit(&search_tree(read_document(&tree)?.tree()?, &cfg)?);
            Ok(())
        }
        Command::Export { dot } => {
            print!("{}", to_dot(&read_labeled(&dot)?));
            Ok(())
        }
        Command::Sweep {
            conjecture2: _,
            n,
            shards,
            shard,
            budget,
        } => sweep(n, shards, shard, budget),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error={} {}", f.name, f.message);
            ExitCode::from(1)
        }
    }
}
