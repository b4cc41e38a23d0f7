//! `tgc`: generate, solve, classify and certify graph collections, and run
//! verification campaigns.
//!
//! Exit codes: 0 success, 1 witness absent or classification unknown,
//! 2 usage or parse error, 3 a campaign found a failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use transversal::construct::constructive_hamilton_path_traced;
use transversal::families::{
    certify, classify, generate_family, single_graph_corollary_families, CorollaryVariant, ExtremalTag, FamilyParams,
    Fill,
};
use transversal::harness::{
    sample_collection, threshold_scan_with, verify_families_with, verify_theorem1_with, RunConfig, Theorem1Mode,
    VerificationReport,
};
use transversal::solver::{
    find_longest_rainbow_cycle, find_transversal_hamilton_cycle, find_transversal_hamilton_path,
};
use transversal::tgc::{parse_tgc, serialize_tgc};
use transversal::{GraphCollection, RainbowWalkResult, WalkKind};

#[derive(Parser)]
#[command(
    name = "tgc",
    version,
    about = "Transversal Hamilton paths and cycles in graph collections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an extremal family or a corollary collection as TGC text.
    Gen {
        /// Family tag (half-split, dom-vertex, hst, near-split-b, no-r2m-*,
        /// hpath-hn10, hpath-near-split) or corollary name (cor-*).
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Number of bipartite colors for `hst`.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = FillArg::Complete)]
        fill: FillArg,
        /// Seed for `--fill random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exceptional_color: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a transversal Hamilton cycle or path, or a longest rainbow cycle.
    Solve {
        #[arg(long, value_enum)]
        target: Target,
        file: PathBuf,
        /// Shortest cycle accepted by `longest-rainbow-cycle`.
        #[arg(long, default_value_t = 3)]
        min_len: usize,
        /// Use the rotation construction for `hamilton-path`.
        #[arg(long)]
        constructive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Match the collection against the extremal families.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Issue a checkable certificate that no transversal Hamilton cycle or path exists.
    Certify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(value_enum)]
        campaign: Campaign,
        /// One value or a comma-separated list.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 2000)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override the sampled minimum degree for `theorem1`.
        #[arg(long)]
        min_degree: Option<usize>,
        /// Obstruction target for `families`.
        #[arg(long, value_enum, default_value_t = Kind::Cycle)]
        target: Kind,
        /// Worker threads; 0 picks the number of cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// Draw a seeded random collection with a minimum degree.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        min_degree: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FillArg {
    Empty,
    Complete,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    HamiltonCycle,
    HamiltonPath,
    LongestRainbowCycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Campaign {
    Theorem1,
    Families,
    Threshold,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cycle,
    Path,
}

enum Failure {
    Usage(String),
    Absent,
    Campaign,
}

impl From<transversal::Error> for Failure {
    fn from(e: transversal::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Absent) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Campaign) => ExitCode::from(3),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            family,
            n,
            t,
            fill,
            seed,
            exceptional_color,
            output,
        } => {
            let c = if let Ok(variant) = family.parse::<CorollaryVariant>() {
                single_graph_corollary_families(n, variant)?
            } else {
                let fill = match fill {
                    FillArg::Empty => Fill::Empty,
                    FillArg::Complete => Fill::Complete,
                    FillArg::Random => Fill::Random(seed),
                };
                let params = FamilyParams {
                    fill,
                    exceptional_color,
                };
                generate_family(ExtremalTag::from_name(&family, t)?, n, params)?
            };
            emit(&serialize_tgc(&c), output)
        }
        Command::Solve {
            target,
            file,
            min_len,
            constructive,
            json,
        } => {
            let c = load(&file)?;
            let (name, walk, route) = match target {
                Target::HamiltonCycle => ("hamilton-cycle", find_transversal_hamilton_cycle(&c)?, None),
                Target::HamiltonPath if constructive => {
                    let built = constructive_hamilton_path_traced(&c)?;
                    ("hamilton-path", built.walk, Some(built.route))
                }
                Target::HamiltonPath => ("hamilton-path", find_transversal_hamilton_path(&c)?, None),
                Target::LongestRainbowCycle => {
                    ("longest-rainbow-cycle", find_longest_rainbow_cycle(&c, min_len)?, None)
                }
            };
            if json {
                let mut out = json!({ "target": name, "present": walk.is_some(), "walk": walk });
                if let Some(route) = route {
                    out["route"] = json!(route);
                }
                println!("{}", pretty(&out));
            } else {
                match &walk {
                    Some(w) => println!("{name}: {}", describe(w)),
                    None => println!("{name}: absent"),
                }
            }
            walk.map(|_| ()).ok_or(Failure::Absent)
        }
        Command::Classify { file, json } => {
            let c = load(&file)?;
            let cls = classify(&c);
            if json {
                println!("{}", pretty(&json!(cls)));
            } else {
                println!("{}", cls.tag);
            }
            if cls.tag == ExtremalTag::Unknown {
                return Err(Failure::Absent);
            }
            Ok(())
        }
        Command::Certify { file, json } => {
            let c = load(&file)?;
            let cert = certify(&c);
            if json {
                println!("{}", pretty(&json!({ "certificate": cert })));
            } else {
                match &cert {
                    Some(cert) => println!(
                        "no transversal Hamilton {}: {} ({})",
                        kind_name(cert.target),
                        cert.class.tag,
                        json!(cert.reason).as_str().unwrap_or_default()
                    ),
                    None => println!("no certificate"),
                }
            }
            cert.map(|_| ()).ok_or(Failure::Absent)
        }
        Command::Verify {
            campaign,
            n,
            mode,
            count,
            seed,
            min_degree,
            target,
            threads,
            json,
        } => {
            let cfg = RunConfig { threads };
            let reports: Vec<VerificationReport> = match campaign {
                Campaign::Theorem1 => n
                    .iter()
                    .map(|&n| {
                        let mode = match mode {
                            Some(Mode::Exhaustive) => Theorem1Mode::Exhaustive,
                            Some(Mode::Sample) => Theorem1Mode::Sample {
                                count,
                                seed,
                                min_degree,
                            },
                            None if n == 4 => Theorem1Mode::Exhaustive,
                            None => Theorem1Mode::Sample {
                                count,
                                seed,
                                min_degree,
                            },
                        };
                        verify_theorem1_with(n, mode, &cfg)
                    })
                    .collect::<Result<_, _>>()?,
                Campaign::Families => {
                    let kind = match target {
                        Kind::Cycle => WalkKind::Cycle,
                        Kind::Path => WalkKind::Path,
                    };
                    vec![verify_families_with(&n, kind, &cfg)?]
                }
                Campaign::Threshold => n
                    .iter()
                    .map(|&n| threshold_scan_with(n, seed, count, &cfg))
                    .collect::<Result<_, _>>()?,
            };
            if json {
                let out = match reports.as_slice() {
                    [one] => json!(one),
                    many => json!(many),
                };
                println!("{}", pretty(&out));
            } else {
                for r in &reports {
                    summarize(r);
                }
            }
            if reports.iter().all(VerificationReport::passed) {
                Ok(())
            } else {
                Err(Failure::Campaign)
            }
        }
        Command::Sample {
            n,
            m,
            min_degree,
            seed,
            output,
        } => emit(&serialize_tgc(&sample_collection(n, m, min_degree, seed)?), output),
    }
}

fn load(path: &PathBuf) -> Result<GraphCollection, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_tgc(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes")
}

fn kind_name(kind: WalkKind) -> &'static str {
    match kind {
        WalkKind::Cycle => "cycle",
        WalkKind::Path => "path",
    }
}

fn describe(w: &RainbowWalkResult) -> String {
    let steps: Vec<String> = w
        .vertices
        .iter()
        .zip(&w.edge_colors)
        .map(|(v, c)| format!("{v} -[{c}]-"))
        .collect();
    let last = match w.kind {
        WalkKind::Cycle => w.vertices[0],
        WalkKind::Path => *w.vertices.last().expect("walks are non-empty"),
    };
    format!("{} {last}", steps.join(" "))
}

fn summarize(r: &VerificationReport) {
    let n: Vec<String> = r.parameters.n.iter().map(usize::to_string).collect();
    println!(
        "{} n={} mode={}: checked {}, skipped {}, failures {} ({} ms)",
        r.campaign,
        n.join(","),
        r.parameters.mode,
        r.checked,
        r.skipped,
        r.failures.len(),
        r.elapsed_ms
    );
    for f in &r.families {
        println!(
            "  {:<24} n={:<2} {}",
            f.family,
            f.n,
            if f.passed { "pass" } else { "FAIL" }
        );
    }
    for (k, v) in &r.tallies {
        println!("  {k}: {v}");
    }
    for f in &r.failures {
        println!("  failure #{}: {}", f.index, f.reason);
    }
}
