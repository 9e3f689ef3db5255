//! Command-line surface: graph generation, critical-group computation,
//! divisor orders, closed-form verification sweeps, and the open-claim
//! consistency checker.
//!
//! Exit codes: 0 success / all cases match, 1 usage error, 2 bad input
//! data, 3 verification mismatch, 4 oracle budget exhausted.

mod claim;
mod grid;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use critgroup::{
    build_hinge, build_thick_cycle, critical_group, divisor_order, divisor_order_bruteforce,
    divisor_order_via_gcd, hinge_dual, make_delta, make_epsilon, make_eta, Divisor, HingeLayout,
    HingeSpec, Multigraph, OracleBudget,
};

const EXIT_USAGE: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "critgroup",
    version,
    about = "Critical groups of multigraphs by exact integer linear algebra",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file (hinge graph, its dual, or a thick cycle)
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Invariant factors and order of a graph's critical group
    Group {
        /// Graph file (JSON with n_vertices and sorted edge triples)
        graph: PathBuf,
        /// Emit structured JSON instead of text
        #[arg(long)]
        json: bool,
        /// Write output to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order of a degree-0 divisor in the critical group
    Order {
        /// Graph file
        graph: PathBuf,
        /// Named divisor: delta, epsilon:<i>, or eta:<i>,<j> (1-based
        /// cycle indices; needs the hinge layout sidecar)
        #[arg(long, conflicts_with = "divisor_file")]
        divisor: Option<String>,
        /// Divisor file (JSON list of integers, one per vertex)
        #[arg(long)]
        divisor_file: Option<PathBuf>,
        /// Layout sidecar path (default: graph path with .layout.json)
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Computation path
        #[arg(long, value_enum, default_value_t = OrderMethod::Coords)]
        method: OrderMethod,
        /// Emit structured JSON instead of text
        #[arg(long)]
        json: bool,
        /// Write output to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a parameter grid and check a closed-form prediction
    Verify {
        /// One of: thm3.1, prop3.2, lemma3.3, thm3.8, thm4.1, prop4.2,
        /// thm4.3, thm4.4, thm2.11, duality, lemma2.14, lemma2.15,
        /// lemma2.16
        target: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Consistency checker for the open factorization claim about
    /// |K(G)| / |delta|; inconsistencies are reported, never fatal
    Claim45 {
        /// Spec selector: all or random:<count>
        #[arg(long, default_value = "all")]
        specs: String,
        /// Largest cycle count for the exhaustive grid
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Largest cycle size
        #[arg(long, default_value_t = 7)]
        max_k: u32,
        /// How to read the spec values: as vertex counts per cycle, or
        /// as the km1 index convention (value v means v+1 vertices)
        #[arg(long, value_enum, default_value_t = Convention::Vertices)]
        convention: Convention,
        /// Seed for random spec sampling
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit structured JSON instead of text
        #[arg(long)]
        json: bool,
        /// Write output to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the sweep
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Hinge graph from comma-separated cycle sizes (each >= 3)
    Hinge {
        /// Cycle sizes, e.g. 5,5,5
        sizes: String,
        /// Generate the thick-cycle planar dual instead
        #[arg(long, conflicts_with = "layout")]
        dual: bool,
        /// Also write the layout sidecar (requires --out)
        #[arg(long, requires = "out")]
        layout: bool,
        /// Write the graph file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thick cycle from comma-separated edge multiplicities (>= 2 entries)
    ThickCycle {
        /// Segment multiplicities, e.g. 2,3,4,1
        multiplicities: String,
        /// Write the graph file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderMethod {
    /// Cokernel coordinates through the Smith transform
    Coords,
    /// Rational firing-count solve; order clears the denominators
    Gcd,
    /// Walk multiples through q-reduction
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// Spec values are cycle vertex counts
    Vertices,
    /// Spec values v mean cycles with v+1 vertices
    Km1,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Cycle-size grid: range 3..8, list 3,5,7, or single value
    #[arg(long)]
    k: Option<String>,
    /// Cycle-count grid, same syntax
    #[arg(long)]
    n: Option<String>,
    /// Spec selector for mixed-shape targets: all or random:<count>
    #[arg(long)]
    specs: Option<String>,
    /// Largest cycle size for spec grids
    #[arg(long)]
    max_k: Option<u32>,
    /// Largest cycle count for exhaustive spec grids
    #[arg(long)]
    max_n: Option<usize>,
    /// Largest cycle count for random spec sampling
    #[arg(long)]
    max_cycles: Option<usize>,
    /// Sample count for the number-theory targets
    #[arg(long)]
    samples: Option<usize>,
    /// RNG seed for random grids
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Emit the report as JSON
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit the report as CSV
    #[arg(long)]
    csv: bool,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the sweep
    #[arg(long)]
    jobs: Option<usize>,
}

/// Failures carrying their process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
    fn bad_input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_BAD_INPUT,
            message: message.into(),
        }
    }
}

impl From<critgroup::Error> for CliError {
    fn from(e: critgroup::Error) -> Self {
        let code = match e {
            critgroup::Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_BAD_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::bad_input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Gen { family } => run_gen(family),
        Command::Group { graph, json, out } => run_group(&graph, json, out.as_deref()),
        Command::Order {
            graph,
            divisor,
            divisor_file,
            layout,
            method,
            json,
            out,
        } => run_order(
            &graph,
            divisor.as_deref(),
            divisor_file.as_deref(),
            layout.as_deref(),
            method,
            json,
            out.as_deref(),
        ),
        Command::Verify {
            target,
            grid,
            output,
        } => run_verify(&target, &grid, &output),
        Command::Claim45 {
            specs,
            max_n,
            max_k,
            convention,
            seed,
            json,
            out,
            jobs,
        } => claim::run(
            &specs,
            max_n,
            max_k,
            convention,
            seed,
            json,
            out.as_deref(),
            jobs,
        ),
    }
}

fn parse_u32_list(s: &str, what: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| CliError::usage(format!("bad {what} value {part:?}")))
        })
        .collect()
}

fn layout_sidecar_path(graph_out: &Path) -> PathBuf {
    graph_out.with_extension("layout.json")
}

fn run_gen(family: GenFamily) -> Result<u8, CliError> {
    match family {
        GenFamily::Hinge {
            sizes,
            dual,
            layout,
            out,
        } => {
            let sizes = parse_u32_list(&sizes, "cycle size")?;
            let spec = HingeSpec::new(sizes)?;
            let graph = if dual {
                hinge_dual(&spec)?
            } else {
                build_hinge(&spec)?.0
            };
            let content = graph.to_canonical_string();
            report::emit(out.as_deref(), &content)?;
            if layout {
                let out = out.as_ref().expect("clap enforces --layout requires --out");
                let (_, hinge_layout) = build_hinge(&spec)?;
                std::fs::write(layout_sidecar_path(out), hinge_layout.to_canonical_string())?;
            }
            Ok(0)
        }
        GenFamily::ThickCycle {
            multiplicities,
            out,
        } => {
            let mults: Vec<u64> = multiplicities
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u64>()
                        .map_err(|_| CliError::usage(format!("bad multiplicity {part:?}")))
                })
                .collect::<Result<_, _>>()?;
            let graph = build_thick_cycle(&mults)?;
            report::emit(out.as_deref(), &graph.to_canonical_string())?;
            Ok(0)
        }
    }
}

fn load_graph(path: &Path) -> Result<Multigraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::bad_input(format!("cannot read {}: {e}", path.display())))?;
    Ok(Multigraph::parse(&text)?)
}

fn run_group(graph_path: &Path, json: bool, out: Option<&Path>) -> Result<u8, CliError> {
    let graph = load_graph(graph_path)?;
    let structure = critical_group(&graph)?;
    let factors: Vec<String> = structure
        .invariant_factors()
        .iter()
        .map(|f| f.to_string())
        .collect();
    let content = if json {
        let doc = serde_json::json!({
            "schema": report::SCHEMA_VERSION,
            "invariant_factors": factors,
            "order": structure.order().to_string(),
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
    } else {
        format!(
            "invariant factors: [{}]\norder: {}\n",
            factors.join(", "),
            structure.order()
        )
    };
    report::emit(out, &content)?;
    Ok(0)
}

/// Parses `delta`, `epsilon:<i>`, or `eta:<i>,<j>` with 1-based cycle
/// indices into the matching divisor on `layout`.
fn named_divisor(name: &str, layout: &HingeLayout) -> Result<Divisor, CliError> {
    let cycle_index = |s: &str| -> Result<usize, CliError> {
        let i: usize = s
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad cycle index {s:?}")))?;
        if i == 0 {
            return Err(CliError::usage("cycle indices are 1-based"));
        }
        Ok(i - 1)
    };
    if name == "delta" {
        return Ok(make_delta(layout));
    }
    if let Some(rest) = name.strip_prefix("epsilon:") {
        return Ok(make_epsilon(layout, cycle_index(rest)?)?);
    }
    if let Some(rest) = name.strip_prefix("eta:") {
        let (i, j) = rest
            .split_once(',')
            .ok_or_else(|| CliError::usage("eta needs two cycle indices, e.g. eta:1,2"))?;
        return Ok(make_eta(layout, cycle_index(i)?, cycle_index(j)?)?);
    }
    Err(CliError::usage(format!(
        "unknown divisor {name:?}; expected delta, epsilon:<i>, or eta:<i>,<j>"
    )))
}

fn run_order(
    graph_path: &Path,
    divisor: Option<&str>,
    divisor_file: Option<&Path>,
    layout: Option<&Path>,
    method: OrderMethod,
    json: bool,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let graph = load_graph(graph_path)?;
    let d = match (divisor, divisor_file) {
        (Some(name), None) => {
            let layout_path = layout
                .map(PathBuf::from)
                .unwrap_or_else(|| layout_sidecar_path(graph_path));
            let text = std::fs::read_to_string(&layout_path).map_err(|e| {
                CliError::bad_input(format!(
                    "named divisors need the layout sidecar; cannot read {}: {e}",
                    layout_path.display()
                ))
            })?;
            let layout = HingeLayout::parse(&text)?;
            if layout.n_vertices() != graph.n_vertices() {
                return Err(CliError::bad_input(format!(
                    "layout describes {} vertices but the graph has {}",
                    layout.n_vertices(),
                    graph.n_vertices()
                )));
            }
            named_divisor(name, &layout)?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::bad_input(format!("cannot read {}: {e}", path.display())))?;
            let values: Vec<i64> = serde_json::from_str(&text)
                .map_err(|e| CliError::bad_input(format!("divisor file: {e}")))?;
            if values.len() != graph.n_vertices() {
                return Err(CliError::bad_input(format!(
                    "divisor has {} entries but the graph has {} vertices",
                    values.len(),
                    graph.n_vertices()
                )));
            }
            Divisor::new(values)
        }
        (None, None) => {
            return Err(CliError::usage(
                "pass --divisor <name> or --divisor-file <path>",
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let (order, method_name): (BigInt, &str) = match method {
        OrderMethod::Coords => (divisor_order(&graph, &d)?, "coords"),
        OrderMethod::Gcd => (divisor_order_via_gcd(&graph, &d)?, "gcd"),
        OrderMethod::Brute => {
            let budget = OracleBudget {
                max_edges: u64::MAX,
                max_group_order: 10_000_000,
                max_multiple: 1_000_000,
            };
            let z = divisor_order_bruteforce(&graph, &d, 0, &budget)?;
            (BigInt::from(z), "brute")
        }
    };
    let content = if json {
        let doc = serde_json::json!({
            "schema": report::SCHEMA_VERSION,
            "order": order.to_string(),
            "method": method_name,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
    } else {
        format!("{order}\n")
    };
    report::emit(out, &content)?;
    Ok(0)
}

fn run_verify(target: &str, grid_args: &GridArgs, output: &OutputArgs) -> Result<u8, CliError> {
    let target = verify::Target::parse(target).map_err(CliError::usage)?;
    let opts = verify::GridOptions {
        k: grid_args.k.clone(),
        n: grid_args.n.clone(),
        specs: grid_args.specs.clone(),
        max_k: grid_args.max_k,
        max_n: grid_args.max_n,
        max_cycles: grid_args.max_cycles,
        samples: grid_args.samples,
        seed: grid_args.seed,
    };
    let started = Instant::now();
    let report = verify::run(target, &opts, output.jobs).map_err(CliError::usage)?;
    let elapsed = started.elapsed();
    let content = if output.json {
        report.to_json()
    } else if output.csv {
        report.to_csv()
    } else {
        report.to_human()
    };
    report::emit(output.out.as_deref(), &content)?;
    if !output.json && !output.csv {
        eprintln!("runtime: {:.3}s", elapsed.as_secs_f64());
    }
    Ok(report.exit_code() as u8)
}
