//! Command line front end: analyze, embed, verify, golden.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pdsplit::io::{parse_spec, run_pipeline, Level, PipelineOptions};

#[derive(Parser)]
#[command(
    name = "pdsplit",
    version,
    about = "exact quasi-linear splitting of polynomial systems in normal form"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resonance structure only: invariance relations, sporadic resonances,
    /// centralizer dimension
    Analyze(RunArgs),
    /// Analyze plus the enlarged quasi-linear system and its symbolic
    /// certificates
    Embed(RunArgs),
    /// Embed plus a numeric split verification along one trajectory
    Verify(RunArgs),
    /// Run every system file in a corpus directory and diff the frozen
    /// reports
    Golden(GoldenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// system file to read
    #[arg(long)]
    input: PathBuf,
    /// sporadic search bound, overrides the file's degree_bound
    #[arg(long)]
    degree_bound: Option<u64>,
    /// integrator step, overrides the file's verify.step
    #[arg(long)]
    step: Option<f64>,
    /// integration horizon, overrides the file's verify.t_final
    #[arg(long)]
    t_final: Option<f64>,
    /// certification tolerance, overrides the file's verify.tol
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GoldenArgs {
    /// corpus directory holding *.toml system files and *.expected.txt
    /// reports
    #[arg(long, default_value = "corpus")]
    input: PathBuf,
    /// rewrite the expected reports instead of diffing
    #[arg(long)]
    update: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(args) => run_report(&args, Level::Analyze),
        Command::Embed(args) => run_report(&args, Level::Embed),
        Command::Verify(args) => run_report(&args, Level::Verify),
        Command::Golden(args) => run_golden(&args),
    };
    ExitCode::from(code)
}

fn run_report(args: &RunArgs, level: Level) -> u8 {
    let text = match fs::read_to_string(&args.input) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return 2;
        }
    };
    let spec = match parse_spec(&text) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let opts = PipelineOptions {
        degree_bound: args.degree_bound,
        t_final: args.t_final,
        step: args.step,
        tol: args.tol,
    };
    let analysis = match run_pipeline(&spec, level, &opts) {
        Ok(analysis) => analysis,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code() as u8;
        }
    };
    let rendered = match args.format {
        Format::Text => analysis.render_text(),
        Format::Machine => analysis.render_machine(),
    };
    if let Some(out) = &args.out {
        if let Err(e) = fs::write(out, &rendered) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return 2;
        }
    } else {
        print!("{rendered}");
    }
    match &analysis.numeric {
        Some(numeric) if !numeric.passed() => {
            eprintln!("error: numeric verification did not certify");
            5
        }
        _ => 0,
    }
}

fn run_golden(args: &GoldenArgs) -> u8 {
    let dir = locate_corpus(&args.input);
    let mut entries: Vec<PathBuf> = match fs::read_dir(&dir) {
        Ok(iter) => iter
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "toml"))
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read corpus directory {}: {e}", dir.display());
            return 2;
        }
    };
    entries.sort();
    if entries.is_empty() {
        eprintln!("error: no system files in {}", dir.display());
        return 2;
    }
    let mut failures = 0usize;
    for path in &entries {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("?")
            .to_string();
        let expected_path = path.with_extension("expected.txt");
        let rendered = match render_corpus_entry(path) {
            Ok(rendered) => rendered,
            Err(message) => {
                eprintln!("FAIL {name}: {message}");
                failures += 1;
                continue;
            }
        };
        if args.update {
            if let Err(e) = fs::write(&expected_path, &rendered) {
                eprintln!("FAIL {name}: cannot write {}: {e}", expected_path.display());
                failures += 1;
            } else {
                println!("wrote {}", expected_path.display());
            }
            continue;
        }
        match fs::read_to_string(&expected_path) {
            Err(e) => {
                eprintln!(
                    "FAIL {name}: cannot read {}: {e} (run `pdsplit golden --update`?)",
                    expected_path.display()
                );
                failures += 1;
            }
            Ok(expected) if expected == rendered => println!("ok {name}"),
            Ok(expected) => {
                eprintln!("FAIL {name}: report differs from {}", expected_path.display());
                print_first_diff(&expected, &rendered);
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("golden: {} reports match", entries.len());
        0
    } else {
        eprintln!("golden: {failures} of {} reports differ", entries.len());
        1
    }
}

fn render_corpus_entry(path: &Path) -> Result<String, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read file: {e}"))?;
    let spec = parse_spec(&text).map_err(|e| e.to_string())?;
    let analysis = run_pipeline(&spec, Level::Embed, &PipelineOptions::default())
        .map_err(|e| e.to_string())?;
    Ok(analysis.render_text())
}

fn locate_corpus(given: &Path) -> PathBuf {
    if given.exists() || given != Path::new("corpus") {
        return given.to_path_buf();
    }
    let nested = Path::new("crates/core/corpus");
    if nested.exists() {
        return nested.to_path_buf();
    }
    given.to_path_buf()
}

fn print_first_diff(expected: &str, actual: &str) {
    let mut expected_lines = expected.lines();
    let mut actual_lines = actual.lines();
    let mut line_no = 1usize;
    loop {
        match (expected_lines.next(), actual_lines.next()) {
            (None, None) => break,
            (old, new) => {
                if old != new {
                    eprintln!("  line {line_no}:");
                    eprintln!("    expected: {}", old.unwrap_or("<end of file>"));
                    eprintln!("    actual:   {}", new.unwrap_or("<end of file>"));
                    break;
                }
            }
        }
        line_no += 1;
    }
}
