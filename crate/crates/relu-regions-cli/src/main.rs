//! Command-line front end: build witness nets, count regions exactly,
//! compile integer nets to ternary form, verify counts against the
//! closed-form bounds, and render 2-D partitions as SVG.
//!
//! Exit codes: 0 success/verified, 1 verification mismatch, 2 usage or input
//! error, 3 enumeration budget exceeded.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use relu_regions::constructions::{
    bound_tradeoff, build_montufar, build_sawtooth, build_ternary, lower_bound_montufar,
    lower_bound_ternary, MontufarParams, TernaryParams,
};
use relu_regions::json::{cells_to_json, net_from_json, net_to_json, report_to_json};
use relu_regions::oracle1d::count_regions_1d;
use relu_regions::region::{
    count_regions_exact_with_limits, enumerate_cells_with_limits, CountError, EnumerationLimits,
    RegionReport,
};
use relu_regions::ternarize::{ternarize_net, IntegerNetProfile, TernarizeOptions};
use relu_regions::{BoxDomain, ReluNet};

#[derive(Parser)]
#[command(
    name = "relu-regions",
    version,
    about = "Exact linear-region analysis of ReLU regression networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a witness network and emit it as network JSON
    #[command(subcommand)]
    Build(BuildCmd),
    /// Count linear regions of a network over a box domain
    Count(CountArgs),
    /// Dump the full cell decomposition (patterns, halfspaces, witnesses)
    Regions(RegionsArgs),
    /// Compile a bounded-integer network to an equivalent ternary network
    Ternarize(TernarizeArgs),
    /// Build a construction, count exactly, and compare with its bound
    Verify(VerifyArgs),
    /// Print closed-form lower bounds on region counts
    Bound(BoundArgs),
    /// Render a 2-D region partition as SVG
    Plot(PlotArgs),
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Zigzag witness network with p = floor(n/n0) pieces per coordinate
    Montufar(ConstructionArgs),
    /// Ternary witness network with q = floor(n/(2(n0+1))) pieces
    Ternary(ConstructionArgs),
    /// 1-D sawtooth with p teeth
    Sawtooth {
        #[arg(long)]
        p: usize,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConstructionArgs {
    #[arg(long)]
    n0: usize,
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    depth: usize,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    net: PathBuf,
    /// Box domain: `unit` or `lo,hi` ranges joined by `x` (e.g. `-1,1x0,1`)
    #[arg(long, default_value = "unit", allow_hyphen_values = true)]
    domain: String,
    /// Exact cell enumeration and merging (the default mode)
    #[arg(long)]
    exact: bool,
    /// 1-D breakpoint-propagation oracle
    #[arg(long = "oracle1d", conflicts_with_all = ["exact", "grid"])]
    oracle_1d: bool,
    /// Lattice sampling estimate at the given per-axis resolution
    #[arg(long, conflicts_with = "exact")]
    grid: Option<u32>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// DFS node budget for exact enumeration
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: u64,
    /// Cell budget for exact enumeration
    #[arg(long, default_value_t = 100_000)]
    max_cells: u64,
}

impl BudgetArgs {
    fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_visited: self.max_nodes,
            max_cells: self.max_cells,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct RegionsArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long, default_value = "unit", allow_hyphen_values = true)]
    domain: String,
    /// Where to write the cell list (`-` for stdout)
    #[arg(long)]
    dump: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct TernarizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Share fan-out copies across the outgoing edges of each source node
    #[arg(long)]
    share: bool,
    /// Expand biases into ±1 edges from constant nodes
    #[arg(long = "strict-bias")]
    strict_bias: bool,
    /// Weight bound M (inferred from the net when omitted)
    #[arg(long = "max-weight")]
    max_weight: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "ternary")]
    montufar: bool,
    #[arg(long)]
    ternary: bool,
    #[arg(long)]
    n0: usize,
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    depth: usize,
    #[arg(long, default_value = "unit", allow_hyphen_values = true)]
    domain: String,
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, conflicts_with_all = ["ternary", "tradeoff"])]
    montufar: bool,
    #[arg(long, conflicts_with = "tradeoff")]
    ternary: bool,
    /// Compare the zigzag bound with the widened, depth-doubled ternary bound
    #[arg(long)]
    tradeoff: bool,
    #[arg(long)]
    n0: usize,
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    depth: usize,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long, default_value = "unit", allow_hyphen_values = true)]
    domain: String,
    #[arg(long)]
    out: PathBuf,
    /// Decimal digits for SVG coordinates
    #[arg(long, default_value_t = 9)]
    precision: u32,
    #[command(flatten)]
    budget: BudgetArgs,
}

struct AppError {
    code: u8,
    message: String,
}

impl AppError {
    fn usage(message: impl Into<String>) -> Self {
        AppError { code: 2, message: message.into() }
    }
}

impl<E: std::error::Error> From<E> for AppError {
    fn from(e: E) -> Self {
        let mut message = e.to_string();
        let mut source = e.source();
        while let Some(cause) = source {
            let text = cause.to_string();
            if !message.contains(&text) {
                message.push_str(&format!(": {text}"));
            }
            source = cause.source();
        }
        AppError { code: 2, message }
    }
}

fn count_error(e: CountError) -> AppError {
    let code = if matches!(e, CountError::BudgetExceeded { .. }) { 3 } else { 2 };
    AppError { code, message: e.to_string() }
}

fn read_net(path: &Path) -> Result<ReluNet, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::usage(format!("cannot read {}: {e}", path.display())))?;
    net_from_json(&text).map_err(AppError::from)
}

fn parse_domain(spec: &str, net: &ReluNet) -> Result<BoxDomain, AppError> {
    let domain = BoxDomain::from_spec(spec, net.input_dim())?;
    if domain.dim() != net.input_dim() {
        return Err(AppError::usage(format!(
            "domain has {} coordinates, the network expects {}",
            domain.dim(),
            net.input_dim()
        )));
    }
    Ok(domain)
}

fn emit_net(net: &ReluNet, out: Option<&Path>) -> Result<(), AppError> {
    let text = net_to_json(net);
    match out {
        Some(path) => fs::write(path, text.as_bytes())
            .map_err(|e| AppError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, AppError> {
    match cli.command {
        Command::Build(cmd) => {
            match cmd {
                BuildCmd::Montufar(args) => {
                    let params = MontufarParams::new(args.n0, args.n, args.depth)?;
                    emit_net(&build_montufar(&params), args.out.as_deref())?;
                }
                BuildCmd::Ternary(args) => {
                    let params = TernaryParams::new(args.n0, args.n, args.depth)?;
                    emit_net(&build_ternary(&params), args.out.as_deref())?;
                }
                BuildCmd::Sawtooth { p, out } => {
                    emit_net(&build_sawtooth(p)?, out.as_deref())?;
                }
            }
            Ok(0)
        }
        Command::Count(args) => {
            let net = read_net(&args.net)?;
            let domain = parse_domain(&args.domain, &net)?;
            if let Some(resolution) = args.grid {
                let estimate =
                    relu_regions::estimate_regions_grid(&net, &domain, resolution).map_err(count_error)?;
                println!("{estimate}");
            } else if args.oracle_1d {
                let report = count_regions_1d(&net, &domain).map_err(count_error)?;
                println!("{}", serde_json::to_string_pretty(&report_to_json(&report)).unwrap());
            } else {
                let report = count_regions_exact_with_limits(&net, &domain, &args.budget.limits())
                    .map_err(count_error)?;
                println!("{}", serde_json::to_string_pretty(&report_to_json(&report)).unwrap());
            }
            Ok(0)
        }
        Command::Regions(args) => {
            let net = read_net(&args.net)?;
            let domain = parse_domain(&args.domain, &net)?;
            let cells = enumerate_cells_with_limits(&net, &domain, &args.budget.limits())
                .map_err(count_error)?;
            let text = serde_json::to_string_pretty(&cells_to_json(&cells)).unwrap();
            if args.dump.as_os_str() == "-" {
                println!("{text}");
            } else {
                fs::write(&args.dump, text.as_bytes())
                    .map_err(|e| AppError::usage(format!("cannot write {}: {e}", args.dump.display())))?;
            }
            Ok(0)
        }
        Command::Ternarize(args) => {
            let net = read_net(&args.input)?;
            let profile = match args.max_weight {
                Some(bound) => IntegerNetProfile::new(net, bound)?,
                None => IntegerNetProfile::with_inferred_bound(net)?,
            };
            let options = TernarizeOptions { share: args.share, strict_bias: args.strict_bias };
            let (ternary, stats) = ternarize_net(&profile, options);
            emit_net(&ternary, Some(&args.out))?;
            println!("{}", serde_json::to_string_pretty(&stats).unwrap());
            Ok(0)
        }
        Command::Verify(args) => {
            if args.montufar == args.ternary {
                return Err(AppError::usage("pass exactly one of --montufar or --ternary"));
            }
            let (net, bound) = if args.montufar {
                let params = MontufarParams::new(args.n0, args.n, args.depth)?;
                (build_montufar(&params), lower_bound_montufar(args.n0, args.n, args.depth)?)
            } else {
                let params = TernaryParams::new(args.n0, args.n, args.depth)?;
                (build_ternary(&params), lower_bound_ternary(args.n0, args.n, args.depth)?)
            };
            let domain = parse_domain(&args.domain, &net)?;
            let report = count_regions_exact_with_limits(&net, &domain, &EnumerationLimits::default())
                .map_err(count_error)?;
            let verified = BigUint::from(report.region_count) == bound;
            print_verify(&args, &bound, &report, verified);
            Ok(if verified { 0 } else { 1 })
        }
        Command::Bound(args) => {
            let selected = [args.montufar, args.ternary, args.tradeoff]
                .iter()
                .filter(|&&b| b)
                .count();
            if selected != 1 {
                return Err(AppError::usage(
                    "pass exactly one of --montufar, --ternary or --tradeoff",
                ));
            }
            if args.montufar {
                println!("{}", lower_bound_montufar(args.n0, args.n, args.depth)?);
            } else if args.ternary {
                println!("{}", lower_bound_ternary(args.n0, args.n, args.depth)?);
            } else {
                let report = bound_tradeoff(args.n0, args.n, args.depth)?;
                let value = serde_json::json!({
                    "montufar": report.montufar.to_string(),
                    "ternary_same_depth": report.ternary_same_depth.map(|b| b.to_string()),
                    "ternary_double_depth": report.ternary_double_depth.to_string(),
                    "widened_width": report.widened_width,
                    "doubled_depth": report.doubled_depth,
                    "double_depth_at_least_montufar": report.double_depth_at_least_montufar,
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            }
            Ok(0)
        }
        Command::Plot(args) => {
            let net = read_net(&args.net)?;
            let domain = parse_domain(&args.domain, &net)?;
            let cells = enumerate_cells_with_limits(&net, &domain, &args.budget.limits())
                .map_err(count_error)?;
            let svg = render::plot_regions_svg(&cells, &domain, args.precision)?;
            fs::write(&args.out, svg.as_bytes())
                .map_err(|e| AppError::usage(format!("cannot write {}: {e}", args.out.display())))?;
            Ok(0)
        }
    }
}

fn print_verify(args: &VerifyArgs, bound: &BigUint, report: &RegionReport, verified: bool) {
    if args.format == "csv" {
        println!("n0,n,L,bound,cell_count,region_count,distinct_affine_count,elapsed_ms");
        println!(
            "{},{},{},{},{},{},{},{}",
            args.n0,
            args.n,
            args.depth,
            bound,
            report.cell_count,
            report.region_count,
            report.distinct_affine_count,
            report.elapsed.as_millis()
        );
    } else {
        let value = serde_json::json!({
            "construction": if args.montufar { "montufar" } else { "ternary" },
            "n0": args.n0,
            "n": args.n,
            "L": args.depth,
            "bound": bound.to_string(),
            "report": report_to_json(report),
            "verified": verified,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
