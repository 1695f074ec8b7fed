use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gradecs::report::Section;
use gradecs::verify::{Scope, VerifyRequest};
use gradecs::{
    classify, oracle_bound, parse_rank_range, parse_type, render, report, to_json, verify, CliError, Format,
};
use gradecs_core::rootdata::TypeLabel;

#[derive(Parser)]
#[command(
    name = "gradecs",
    version,
    about = "Stable gradings, character sheaves and endoscopy for simple Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Output {
    /// output format
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// shorthand for --format json
    #[arg(long)]
    json: bool,
    /// write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List the stable gradings of a type over a rank range
    Classify {
        #[arg(long = "type", value_parser = parse_type)]
        type_label: TypeLabel,
        /// "5", "4..6" or "4..=6"
        #[arg(long, value_parser = parse_rank_range)]
        rank: Option<std::ops::RangeInclusive<usize>>,
        #[command(flatten)]
        out: Output,
    },
    /// Full analysis of one case, e.g. "D:n=6:m=6:r=1:twist=2"
    Report {
        case: String,
        #[arg(value_enum)]
        sections: Vec<Section>,
        #[command(flatten)]
        out: Output,
    },
    /// Check computed data against oracles, invariants and closed forms
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        claim: Option<String>,
        #[arg(long = "type", value_parser = parse_type)]
        type_label: Option<TypeLabel>,
        #[arg(long, default_value_t = 8)]
        rank_bound: usize,
        #[command(flatten)]
        out: Output,
    },
}

fn emit<T: serde::Serialize>(doc: &T, title: &str, out: &Output) -> Result<(), CliError> {
    let text = match out.format() {
        Format::Json => to_json(doc)?,
        Format::Md => {
            let v = serde_json::to_value(doc).map_err(|e| CliError::Internal(e.to_string()))?;
            render::markdown(title, &v)
        }
    };
    match &out.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.cmd {
        Cmd::Classify { type_label, rank, out } => {
            let ranks = match rank {
                Some(r) => r,
                None => {
                    let n = type_label.fixed_rank().ok_or_else(|| CliError::Usage("--rank is required".into()))?;
                    n..=n
                }
            };
            if !ranks.clone().any(|n| type_label.valid_rank(n)) {
                return Err(CliError::Usage(format!("no valid rank for {} in {:?}", type_label, ranks)));
            }
            let doc = classify::classify(type_label, ranks);
            emit(&doc, &format!("Stable gradings of {}", type_label), &out)?;
            Ok(true)
        }
        Cmd::Report { case, sections, out } => {
            let doc = report::report(&case, &sections)?;
            emit(&doc, &format!("Report {}", doc.case), &out)?;
            Ok(true)
        }
        Cmd::Verify { scope, case, claim, type_label, rank_bound, out } => {
            let req = VerifyRequest { scope, case, claim, type_label, rank_bound, oracle_bound: oracle_bound() };
            let doc = verify::verify(&req)?;
            emit(&doc, "Verification", &out)?;
            Ok(!doc.failed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gradecs: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
