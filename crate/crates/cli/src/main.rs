use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use expander_core::bounds::{self, BoundKind, BoundParams, BoundValue};
use expander_core::expansion;
use expander_core::planner::{self, ConstructOptions, Strategy};
use expander_core::spectral::SpectralConfig;
use expander_core::{Error, Graph, Result};

#[derive(Parser)]
#[command(name = "expander", version, about = "Build and certify near-Ramanujan regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a k-regular graph and write it with its certificate.
    Construct {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        min_vertices: usize,
        #[arg(long, default_value = "matching")]
        strategy: Strategy,
        #[arg(long)]
        graph_out: PathBuf,
        #[arg(long)]
        cert_out: PathBuf,
        /// Largest q tried for the base graph.
        #[arg(long, default_value_t = planner::DEFAULT_Q_MAX)]
        q_max: u64,
        #[arg(long, default_value_t = 1.0)]
        rh_constant: f64,
        /// k from which the p^0.525 gap bound is taken as proven.
        #[arg(long)]
        bhp_threshold: Option<u64>,
    },
    /// Certify a connected regular graph read from an edge list.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert_out: PathBuf,
    },
    /// Maximum normalized prime gap per range of k.
    DeltaTable {
        /// Comma-separated lo:hi pairs.
        #[arg(long)]
        ranges: Option<String>,
    },
    /// Evaluate the explicit gap bounds at k.
    Bounds {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        rh_constant: f64,
        #[arg(long)]
        bhp_threshold: Option<u64>,
    },
    /// Exact edge expansion of a small graph.
    Expansion {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Raise X^{p,q} to target-k by matchings and by K2 products.
    Compare {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        target_k: u64,
    },
}

fn bound_line(v: &BoundValue) -> String {
    format!(
        "{:<9} gap>={:<22} lambda2<={:<22} clamped={:<22} valid={} conditional={}",
        v.model.name(),
        v.value,
        v.lambda2_bound(),
        v.clamped(),
        v.valid,
        v.conditional
    )
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Construct { k, min_vertices, strategy, graph_out, cert_out, q_max, rh_constant, bhp_threshold } => {
            let options = ConstructOptions {
                q_max,
                spectral: SpectralConfig::default(),
                bounds: BoundParams { bhp_threshold, rh_constant },
            };
            let (g, cert) = planner::construct(k, min_vertices, strategy, &options)?;
            g.save(&graph_out)?;
            cert.save(&cert_out)?;
            println!(
                "k={} n={} lambda2={} gap={} ramanujan={}",
                cert.k, cert.n, cert.lambda2, cert.spectral_gap, cert.ramanujan
            );
            for b in &cert.bounds {
                println!("  {:<11} gap>={} valid={} holds={}", b.model, b.value, b.valid, b.holds);
            }
        }
        Command::Certify { graph, cert_out } => {
            let g = Graph::load(&graph)?;
            let cert = planner::certify(&g, &SpectralConfig::default())?;
            cert.save(&cert_out)?;
            println!(
                "k={} n={} lambda2={} gap={} ramanujan={}",
                cert.k, cert.n, cert.lambda2, cert.spectral_gap, cert.ramanujan
            );
        }
        Command::DeltaTable { ranges } => {
            let ranges = match ranges {
                Some(s) => bounds::parse_ranges(&s)?,
                None => bounds::DEFAULT_TABLE_RANGES.to_vec(),
            };
            println!("range max_delta ceil2 witness_k p p_next");
            for row in bounds::delta_table(&ranges)? {
                println!(
                    "{}:{} {:.10} {:.2} {} {} {}",
                    row.lo,
                    row.hi,
                    row.max_delta,
                    row.ceil2(),
                    row.witness_k,
                    row.p,
                    row.p_next
                );
            }
        }
        Command::Bounds { k, model, rh_constant, bhp_threshold } => {
            let params = BoundParams { bhp_threshold, rh_constant };
            let kinds: Vec<BoundKind> = match model.as_deref() {
                None => BoundKind::ALL.to_vec(),
                Some("chain") => vec![BoundKind::ChainIntermediate, BoundKind::DeltaExact],
                Some(name @ ("trudgian" | "bhp" | "rh")) => vec![name.parse()?],
                Some(other) => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown model {other:?}; expected chain, trudgian, bhp or rh"
                    )))
                }
            };
            for kind in kinds {
                println!("{}", bound_line(&bounds::evaluate(kind, k, &params)?));
            }
        }
        Command::Expansion { graph } => {
            let g = Graph::load(&graph)?;
            let e = expansion::expanding_constant_exact(&g)?;
            println!("{}", serde_json::to_string_pretty(&e)?);
        }
        Command::Compare { p, q, target_k } => {
            let report = planner::compare_strategies(p, q, target_k, &SpectralConfig::default())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
