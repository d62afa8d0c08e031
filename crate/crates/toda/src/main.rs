//! Batch CLI: `toda run <config> [--override key=value]... [--quiet]`.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical
//! failure (non-finite state or reported instability).

use std::path::PathBuf;
use std::process::ExitCode;
use toda::config::parse_config_with_overrides;
use toda::error::TodaError;
use toda::runner::execute;

const USAGE: &str = "usage: toda run <config> [--override key=value]... [--quiet]";

fn fail(msg: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("toda: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut it = args.iter();
    match it.next().map(String::as_str) {
        Some("run") => {}
        _ => return fail(USAGE, 1),
    }
    let config_path = match it.next() {
        Some(p) => PathBuf::from(p),
        None => return fail(USAGE, 1),
    };
    let mut overrides = Vec::new();
    let mut quiet = false;
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--override" => match it.next() {
                Some(kv) => overrides.push(kv.clone()),
                None => return fail("--override needs a key=value argument", 1),
            },
            "--quiet" => quiet = true,
            other => return fail(format!("unknown argument `{other}`\n{USAGE}"), 1),
        }
    }

    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", config_path.display()), 1),
    };
    let cfg = match parse_config_with_overrides(&text, &overrides) {
        Ok(c) => c,
        Err(e) => return fail(format!("{}: {e}", config_path.display()), 1),
    };
    let out_dir = cfg
        .output_dir
        .clone()
        .or_else(|| std::env::var_os("TODA_OUTPUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("toda_out"));

    match execute(&cfg, &out_dir) {
        Ok(()) => {
            if !quiet {
                println!("toda: {} run complete, outputs in {}", cfg.system.name(), out_dir.display());
            }
            ExitCode::SUCCESS
        }
        Err(e @ (TodaError::NonFinite { .. } | TodaError::Instability { .. })) => fail(e, 2),
        Err(e) => fail(e, 1),
    }
}
