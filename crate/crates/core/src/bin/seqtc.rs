//! Command-line front end: bound queries over problem files, ring and
//! nilpotence inspection, and the golden reproduction run.
//!
//! Exit codes: 0 success, 1 usage or parse errors, 2 contradiction or
//! golden mismatch.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use seqtc::engine::render_hi;
use seqtc::hom::diagonal_evaluation_map;
use seqtc::nil::nil_index_with_witness;
use seqtc::problem::{catalog_map_by_name, catalog_space_by_name, parse_problem_file, solve};
use seqtc::report::{bound_report, bound_report_human, bound_report_json};
use seqtc::{reproduce, Error};

#[derive(Parser)]
#[command(
    name = "seqtc",
    about = "Exact interval bounds for sequential topological complexity invariants of maps",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a JSON problem file ("-" reads stdin) and report each query
    Bound {
        file: String,
        /// Emit the canonical machine report instead of the table
        #[arg(long)]
        json: bool,
        /// Include the tightening trace per query (default)
        #[arg(long, overrides_with = "no_trace")]
        trace: bool,
        /// Omit the tightening traces
        #[arg(long)]
        no_trace: bool,
        /// Override the problem file's r_max
        #[arg(long)]
        r_max: Option<u32>,
    },
    /// Print the cohomology presentation of a catalog space
    Ring {
        space: String,
        /// Restrict the basis listing to one degree
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Nilpotence of the kernel of the diagonal-evaluation pullback
    Nil {
        map: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        json: bool,
    },
    /// Re-derive the built-in tables and compare against embedded values
    Reproduce {
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are successes, everything else is
            // a usage error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Contradiction(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Bound {
            file,
            json,
            trace: _,
            no_trace,
            r_max,
        } => cmd_bound(&file, json, !no_trace, r_max),
        Command::Ring {
            space,
            degree,
            json,
        } => cmd_ring(&space, degree, json),
        Command::Nil { map, r, s, json } => cmd_nil(&map, r, s, json),
        Command::Reproduce { json } => cmd_reproduce(json),
    }
}

fn cmd_bound(
    file: &str,
    json: bool,
    include_trace: bool,
    r_max: Option<u32>,
) -> Result<ExitCode, Error> {
    let text = if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("reading {file}: {e}")))?
    };
    let mut problem = parse_problem_file(&text)?;
    if let Some(r) = r_max {
        if r < 2 {
            return Err(Error::Parse("r_max must be >= 2".into()));
        }
        problem.r_max = r;
    }
    let state = solve(&problem)?;
    let consistency = state.check_consistency();
    if !consistency.ok() {
        for p in &consistency.problems {
            eprintln!("inconsistency: {p}");
        }
        return Err(Error::Contradiction(
            "the solved state failed its consistency cross-checks".into(),
        ));
    }
    let report = bound_report(&state, &problem)?;
    if json {
        let value = bound_report_json(&state, &report, include_trace);
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
    } else {
        print!("{}", bound_report_human(&state, &report, include_trace));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ring(space: &str, degree: Option<u32>, json: bool) -> Result<ExitCode, Error> {
    let spec = catalog_space_by_name(space)
        .ok_or_else(|| Error::UnknownName(format!("space {space:?}")))??;
    let ring = spec
        .ring
        .as_ref()
        .ok_or_else(|| Error::InvalidSpace(format!("{space} has no ring")))?;
    let degrees: Vec<u32> = match degree {
        Some(d) => vec![d],
        None => (0..=ring.top_degree()).collect(),
    };
    if json {
        let gens: Vec<_> = ring
            .generators()
            .iter()
            .map(|g| json!({"degree": g.degree, "name": g.name, "truncation": g.truncation}))
            .collect();
        let basis: Vec<_> = degrees
            .iter()
            .map(|&d| {
                let monomials: Vec<String> = ring
                    .degree_basis(d)
                    .iter()
                    .map(|&c| ring.render_monomial(c))
                    .collect();
                json!({"degree": d, "dim": monomials.len(), "monomials": monomials})
            })
            .collect();
        let value = json!({
            "basis": basis,
            "generators": gens,
            "space": spec.name,
            "top_degree": ring.top_degree(),
            "total_dim": ring.total_dim(),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
    } else {
        println!("{}", spec.name);
        for g in ring.generators() {
            println!(
                "  generator {}: degree {}, truncation {}",
                g.name, g.degree, g.truncation
            );
        }
        println!(
            "  total dimension {}, top degree {}",
            ring.total_dim(),
            ring.top_degree()
        );
        for &d in &degrees {
            let monomials: Vec<String> = ring
                .degree_basis(d)
                .iter()
                .map(|&c| ring.render_monomial(c))
                .collect();
            if monomials.is_empty() && degree.is_none() {
                continue;
            }
            println!(
                "  degree {d} (dim {}): {}",
                monomials.len(),
                monomials.join(", ")
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_nil(map: &str, r: u32, s: u32, json: bool) -> Result<ExitCode, Error> {
    let spec =
        catalog_map_by_name(map).ok_or_else(|| Error::UnknownName(format!("map {map:?}")))??;
    let pullback = spec
        .pullback
        .as_ref()
        .ok_or_else(|| Error::InvalidMap(format!("{map} carries no pullback data")))?;
    let diag = diagonal_evaluation_map(pullback, r, s)?;
    let (nil, witness) = nil_index_with_witness(&diag);
    if json {
        let witness_value = match &witness {
            Some(w) => json!({
                "degree": w.degree,
                "element": w.element.to_string(),
                "product_length": w.length,
            }),
            None => serde_json::Value::Null,
        };
        let value = json!({
            "map": spec.name,
            "nil": nil,
            "r": r,
            "s": s,
            "witness": witness_value,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
    } else {
        println!("nil(Ker of the diagonal-evaluation pullback of {map} at r={r}, s={s}) = {nil}");
        match witness {
            Some(w) => println!(
                "  witness: a nonzero product of {} kernel classes in degree {}: {}",
                w.length, w.degree, w.element
            ),
            None => println!("  the kernel is zero"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(json: bool) -> Result<ExitCode, Error> {
    let report = reproduce::run()?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reproduce::to_json(&report)).expect("serializable")
        );
    } else {
        print!("{}", reproduce::human(&report));
    }
    if report.ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        for row in report.mismatches() {
            eprintln!(
                "mismatch: {} expected [{}, {}] got [{}, {}]",
                row.quantity,
                row.expected_lo,
                render_hi(row.expected_hi),
                row.got_lo,
                render_hi(row.got_hi),
            );
        }
        Ok(ExitCode::from(2))
    }
}
