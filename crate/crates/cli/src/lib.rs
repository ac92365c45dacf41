//! Command-line front end: problem files, the expression DSL and output
//! formats.

pub mod commands;
pub mod error;
pub mod parse;
pub mod problem;
pub mod render;

use std::path::PathBuf;

use clap::Parser;
use serde_json::json;
use varseq_core::expr::BundleSpec;
use varseq_core::variational::Status;

pub use commands::{run, Command, Item, Report, RunOptions, Value};
pub use error::CliError;
pub use problem::{load, load_str, Problem};
pub use render::Format;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "VARSEQ_SEED";

#[derive(Parser, Debug)]
#[command(name = "varseq", version, about = "Exact variational sequence computations")]
pub struct Args {
    /// What to compute.
    #[arg(value_enum)]
    pub command: Command,
    /// Problem file (TOML).
    pub file: PathBuf,
    /// Vector field by name; repeat for several.
    #[arg(long = "field")]
    pub fields: Vec<String>,
    /// Variation order; a single field is repeated this many times.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for generated fields.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Identity suite for `check`.
    #[arg(long, value_parser = problem::parse_suite)]
    pub suite: Option<varseq_core::variational::Suite>,
}

pub fn render_report(cmd: Command, b: &BundleSpec, r: &Report, format: Format, seed: u64) -> String {
    match format {
        Format::Plain | Format::Latex => {
            let latex = format == Format::Latex;
            let mut out = String::new();
            for it in &r.items {
                let line = match &it.value {
                    Value::Expr(e) if latex => format!("{} = {}", it.label, render::expr_latex(b, e)),
                    Value::Expr(e) => format!("{} = {}", it.label, render::expr_plain(b, e)),
                    Value::Form(f) if latex => format!("{} = {}", it.label, render::form_latex(b, f)),
                    Value::Form(f) => format!("{} = {}", it.label, render::form_plain(b, f)),
                    Value::Status(Status::Pass, _) => format!("PASS {}", it.label),
                    Value::Status(Status::Fail, d) => format!("FAIL {}: {d}", it.label),
                    Value::Status(Status::Skipped(why), _) => format!("SKIP {} ({why})", it.label),
                    Value::Text(t) => format!("{}: {t}", it.label),
                };
                out.push_str(&line);
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = r
                .items
                .iter()
                .map(|it| match &it.value {
                    Value::Expr(e) => json!({ "label": it.label, "kind": "expr", "value": render::expr_json(b, e) }),
                    Value::Form(f) => json!({ "label": it.label, "kind": "form", "value": render::form_json(b, f) }),
                    Value::Status(s, d) => {
                        let (status, why) = match s {
                            Status::Pass => ("pass", None),
                            Status::Fail => ("fail", None),
                            Status::Skipped(w) => ("skip", Some(w.clone())),
                        };
                        json!({ "label": it.label, "kind": "status", "status": status, "reason": why, "detail": d })
                    }
                    Value::Text(t) => json!({ "label": it.label, "kind": "text", "value": t }),
                })
                .collect();
            let cmd_name = clap::ValueEnum::to_possible_value(&cmd)
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            let doc = json!({
                "schema_version": render::SCHEMA_VERSION,
                "command": cmd_name,
                "seed": seed,
                "failed": r.failed(),
                "items": items,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
    }
}

/// Runs the tool and returns the text to print and the exit code.
pub fn execute(args: &Args) -> Result<(String, i32), CliError> {
    let p = load(&args.file)?;
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got '{s}'")))?,
        ),
        Err(_) => None,
    };
    let seed = env_seed.or(args.seed).unwrap_or(p.seed);
    let opts = RunOptions {
        fields: args.fields.clone(),
        order: args.order,
        seed: Some(seed),
        suite: args.suite,
    };
    let report = run(args.command, &p, &opts)?;
    let format = args.format.or(p.format).unwrap_or_default();
    let text = render_report(args.command, &p.bundle, &report, format, seed);
    Ok((text, if report.failed() > 0 { 1 } else { 0 }))
}
