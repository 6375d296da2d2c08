//! Command-line interface: construct PG(2,q), verify point sets, solve
//! secant-distribution systems, compute stabilizers and run the
//! classification engine.
//!
//! Exit codes: 0 success, 2 infeasible configuration, 3 verification
//! failure, 4 i/o failure.

use clap::{Parser, Subcommand, ValueEnum};
use semiarcs::constraints::{enumerate_secant_distributions, max_secant_length, size_bounds, size_feasibility};
use semiarcs::report::{format_pointset, parse_pointset, plane_json, report_csv, report_json};
use semiarcs::search::{checkpoint_finds, CheckpointConfig, SearchError};
use semiarcs::semiarc::{design_check, is_admissible, is_t_semiarc, secant_distribution, tangent_count};
use semiarcs::{classify, stabilizer, Field, FieldSpec, GroupKind, Plane, SearchConfig};
use serde_json::json;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "semiarcs", about = "t-semiarcs in PG(2,q): analysis and exhaustive classification")]
struct Cli {
    /// Plane order q (a prime power at most 13)
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Custom modulus coefficients c0,..,ch for GF(p^h)
    #[arg(long, global = true, value_delimiter = ',')]
    field_modulus: Option<Vec<u32>>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Pgl,
    Pgammal,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> GroupKind {
        match g {
            Group::Pgl => GroupKind::Pgl,
            Group::Pgammal => GroupKind::PGammaL,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump the incidence structure of PG(2,q)
    Plane {
        #[arg(long)]
        list: Option<String>,
    },
    /// Size bounds and divisibility feasibility for 2-semiarcs
    Bounds {},
    /// Check a point set: semiarc verdict, distribution, design property
    Verify {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        points: String,
    },
    /// Solve the integer secant-distribution system
    Distributions {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        max_len: Option<u32>,
        /// Extra bounds i=v (repeatable)
        #[arg(long = "cap")]
        caps: Vec<String>,
    },
    /// Set stabilizer of a point set
    Stabilizer {
        #[arg(long)]
        points: String,
        #[arg(long, value_enum, default_value_t = Group::Pgl)]
        group: Group,
    },
    /// Exhaustive isomorph-free classification of t-semiarcs
    Classify {
        #[arg(long)]
        t: u32,
        /// Comma-separated target sizes; defaults to the feasible range
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<u32>>,
        #[arg(long)]
        threshold: Option<u32>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Group::Pgl)]
        group: Group,
        /// Disable a prune: distribution, long-secant, structural, child-dedup
        #[arg(long = "no-prune")]
        no_prune: Vec<String>,
        #[arg(long, default_value_t = false)]
        long_run: bool,
        /// Stop after the first example of each size (mining mode)
        #[arg(long, default_value_t = false)]
        first: bool,
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        checkpoint_interval: usize,
    },
    /// List finds recorded in a checkpoint directory
    CheckpointFinds {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn make_plane(q: Option<u32>, modulus: &Option<Vec<u32>>) -> Result<Plane, String> {
    let q = q.ok_or("--q is required")?;
    let spec = match modulus {
        Some(m) => {
            let base = FieldSpec::for_order(q).map_err(|e| e.to_string())?;
            FieldSpec::new(base.p, base.h, m.clone())
        }
        None => FieldSpec::for_order(q).map_err(|e| e.to_string())?,
    };
    let field = Field::new(&spec).map_err(|e| e.to_string())?;
    Plane::new(field).map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {}: {}", path.display(), e)),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {}", msg);
            code
        }
    }
}

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_IO: u8 = 4;

fn run(cli: &Cli) -> Result<ExitCode, (ExitCode, String)> {
    let io_err = |m: String| (ExitCode::from(EXIT_IO), m);
    let cfg_err = |m: String| (ExitCode::from(EXIT_INFEASIBLE), m);
    match &cli.cmd {
        Cmd::Plane { list } => {
            let plane = make_plane(cli.q, &cli.field_modulus).map_err(cfg_err)?;
            let doc = plane_json(&plane, list.as_deref());
            emit(&cli.out, &serde_json::to_string_pretty(&doc).unwrap()).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bounds {} => {
            let q = cli.q.ok_or_else(|| cfg_err("--q is required".into()))?;
            let b = size_bounds(q);
            let sizes: Vec<serde_json::Value> = (b.lower..=b.upper)
                .map(|s| {
                    let v = size_feasibility(q, s).unwrap();
                    json!({"size": s, "feasible": v.feasible, "reason": v.reason, "witness": v.witness})
                })
                .collect();
            let doc = json!({
                "schema": 1,
                "q": q,
                "lower": b.lower,
                "upper": b.upper,
                "max_secant_length_t2": if q >= 2 { max_secant_length(q, 2) } else { 0 },
                "sizes": sizes,
            });
            emit(&cli.out, &serde_json::to_string_pretty(&doc).unwrap()).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { t, points } => {
            let plane = make_plane(cli.q, &cli.field_modulus).map_err(cfg_err)?;
            let set = parse_pointset(&plane, points).map_err(|e| cfg_err(e.to_string()))?;
            let semiarc = is_t_semiarc(&plane, &set, *t).map_err(|e| cfg_err(e.to_string()))?;
            let admissible = is_admissible(&plane, &set, *t).unwrap();
            let dist = secant_distribution(&plane, &set);
            let design = if semiarc { design_check(&plane, &set, *t).ok() } else { None };
            let tangents: Vec<u32> = set.iter().map(|p| tangent_count(&plane, &set, p).unwrap()).collect();
            let doc = json!({
                "schema": 1,
                "q": plane.q,
                "t": t,
                "size": set.count(),
                "points": format_pointset(&plane, &set),
                "is_semiarc": semiarc,
                "is_admissible": admissible,
                "tangent_counts": tangents,
                "x": dist.x,
                "design_check": design,
            });
            emit(&cli.out, &serde_json::to_string_pretty(&doc).unwrap()).map_err(io_err)?;
            if semiarc {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_VERIFY))
            }
        }
        Cmd::Distributions { s, t, max_len, caps } => {
            let q = cli.q.ok_or_else(|| cfg_err("--q is required".into()))?;
            let ml = max_len.unwrap_or_else(|| max_secant_length(q, *t));
            let mut parsed_caps = Vec::new();
            for c in caps {
                let (i, v) = c
                    .split_once('=')
                    .ok_or_else(|| cfg_err(format!("bad cap '{}', expected i=v", c)))?;
                parsed_caps.push((
                    i.trim().parse::<u32>().map_err(|e| cfg_err(e.to_string()))?,
                    v.trim().parse::<u64>().map_err(|e| cfg_err(e.to_string()))?,
                ));
            }
            let rows = enumerate_secant_distributions(q, *s, *t, ml, &parsed_caps);
            match cli.format {
                Format::Csv => {
                    let mut out = (0..=ml).map(|i| format!("x{}", i)).collect::<Vec<_>>().join(",");
                    out.push('\n');
                    for row in &rows {
                        out.push_str(&row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                        out.push('\n');
                    }
                    emit(&cli.out, &out).map_err(io_err)?;
                }
                Format::Json => {
                    let doc = json!({"schema": 1, "q": q, "s": s, "t": t, "max_len": ml, "rows": rows});
                    emit(&cli.out, &serde_json::to_string_pretty(&doc).unwrap()).map_err(io_err)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Stabilizer { points, group } => {
            let plane = make_plane(cli.q, &cli.field_modulus).map_err(cfg_err)?;
            let set = parse_pointset(&plane, points).map_err(|e| cfg_err(e.to_string()))?;
            let rep = stabilizer(&plane, &set, (*group).into());
            let doc = json!({
                "schema": 1,
                "q": plane.q,
                "group": match group { Group::Pgl => "pgl", Group::Pgammal => "pgammal" },
                "points": format_pointset(&plane, &set),
                "report": rep,
            });
            emit(&cli.out, &serde_json::to_string_pretty(&doc).unwrap()).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify {
            t,
            sizes,
            threshold,
            workers,
            group,
            no_prune,
            long_run,
            first,
            checkpoint_dir,
            checkpoint_interval,
        } => {
            let plane = make_plane(cli.q, &cli.field_modulus).map_err(cfg_err)?;
            let mut cfg = SearchConfig::new(*t);
            cfg.sizes = sizes.as_ref().map(|v| v.iter().copied().collect::<BTreeSet<u32>>());
            cfg.threshold = *threshold;
            cfg.workers = (*workers).max(1);
            cfg.group = (*group).into();
            cfg.long_run = *long_run;
            cfg.first_only = *first;
            for p in no_prune {
                match p.as_str() {
                    "distribution" => cfg.prune_distribution = false,
                    "long-secant" => cfg.prune_long_secant = false,
                    "structural" => cfg.prune_structural = false,
                    "child-dedup" => cfg.child_dedup = false,
                    other => return Err(cfg_err(format!("unknown prune '{}'", other))),
                }
            }
            if let Some(dir) = checkpoint_dir {
                cfg.checkpoint = Some(CheckpointConfig { dir: dir.clone(), interval: (*checkpoint_interval).max(1) });
            }
            let report = classify(&plane, &cfg).map_err(|e| match e {
                SearchError::Io(_) => io_err(e.to_string()),
                _ => cfg_err(e.to_string()),
            })?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report_json(&plane, &report)).unwrap(),
                Format::Csv => report_csv(&plane, &report),
            };
            emit(&cli.out, &text).map_err(io_err)?;
            eprintln!(
                "classified q={} t={}: {} classes, {} nodes, threshold {}, {} ms",
                plane.q,
                t,
                report.records.len(),
                report.stats.nodes,
                report.stats.threshold,
                report.stats.runtime_ms
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CheckpointFinds { dir, workers } => {
            let finds = checkpoint_finds(dir, *workers).map_err(|e| io_err(e.to_string()))?;
            let doc = json!({"schema": 1, "finds": finds});
            emit(&cli.out, &serde_json::to_string_pretty(&doc).unwrap()).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
