use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use netchain::report::emit_batch;
use netchain::{emit, parse, run_document, AnalysisReport, Command, Format, Options};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Check conservation and equilibrium laws on networks described as chain complexes.
///
/// Exit status is 0 when every analysis passes, 1 when any fails and 2 when an
/// input cannot be read, parsed or lacks the data a command needs.
#[derive(Debug, Parser)]
#[command(name = "netchain", version)]
struct Args {
    /// homology, kcl, kvl, statics, moments, rigidity, mass, momentum, angular,
    /// energy, virtual-work, dalembert or report-all. Without it the document's
    /// own analyses run, or report-all when it lists none.
    command: Option<String>,
    /// Network document (JSON).
    #[arg(long, required_unless_present = "input_dir", conflicts_with = "input_dir")]
    input: Option<PathBuf>,
    /// Directory of documents; every `*.json` file runs, in name order.
    #[arg(long)]
    input_dir: Option<PathBuf>,
    /// Absolute tolerance for inexact arithmetic [default: 1e-9].
    #[arg(long)]
    tolerance: Option<f64>,
    /// Node id used as the moment origin.
    #[arg(long)]
    origin: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// First sample index of the time window.
    #[arg(long)]
    t0: Option<usize>,
    /// Last sample index of the time window.
    #[arg(long)]
    t1: Option<usize>,
}

fn process(path: &Path, command: Option<Command>, opts: &Options) -> Result<AnalysisReport, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    run_document(&doc, command, opts, &bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command.as_deref().map(str::parse::<Command>).transpose() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = Options { origin: args.origin, tolerance: args.tolerance, t0: args.t0, t1: args.t1 };
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };

    let (entries, batch) = match (&args.input, &args.input_dir) {
        (Some(path), _) => (vec![(path.display().to_string(), process(path, command, &opts))], false),
        (None, Some(dir)) => match json_files(dir) {
            Ok(files) => {
                let entries = files
                    .iter()
                    .map(|p| {
                        let name = p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                        (name, process(p, command, &opts))
                    })
                    .collect();
                (entries, true)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        (None, None) => unreachable!("clap requires an input"),
    };

    if batch {
        print!("{}", emit_batch(&entries, format));
    } else if let (_, Ok(report)) = &entries[0] {
        print!("{}", emit(report, format));
    }

    let mut status = 0;
    for (name, result) in &entries {
        match result {
            Err(e) => {
                eprintln!("error: {e}");
                status = 2;
            }
            Ok(report) => {
                let failed = report.failures();
                if !failed.is_empty() {
                    eprintln!("{name}: failed: {}", failed.join(", "));
                    status = status.max(1);
                }
            }
        }
    }
    ExitCode::from(status)
}
