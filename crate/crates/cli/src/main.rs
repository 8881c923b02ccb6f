use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde_json::json;

use torific_cli::report::render_text;
use torific_cli::{execute, Cli};

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let code = e.exit_code();
            println!("{}", json!({ "error": e.to_string(), "exit_code": code }));
            eprintln!("error: {e}");
            return Ok(ExitCode::from(code));
        }
    };
    let rendered = if cli.text {
        render_text(&outcome.report)
    } else {
        serde_json::to_string_pretty(&outcome.report)? + "\n"
    };
    print!("{rendered}");
    if let Some(path) = &cli.out {
        let body = outcome.artifact.clone().unwrap_or_else(|| rendered.clone());
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::from(outcome.code))
}
