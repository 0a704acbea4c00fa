use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hodge_homotopy::cli::{self, Command, Input, JobSpec, Options};

/// Exact mixed Hodge computations on rational homotopy types.
///
/// Commands: validate, rees, split-mhs, bundle-type, homotopy, pi3, pi4,
/// mc-gauge, kahler-validate, formality, monodromy, deligne, archimedean.
/// `fixture NAME` prints the input document of a named fixture.
///
/// Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 internal error.
#[derive(Parser, Debug)]
#[command(name = "hodge-homotopy", version)]
struct Args {
    /// Command to run, or `fixture`.
    command: String,
    /// Input document (JSON), or the fixture name for `fixture`.
    input: Option<String>,
    /// Use a named fixture instead of an input file.
    #[arg(long)]
    fixture: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation degree for homotopy groups and the monodromy.
    #[arg(long)]
    n_max: Option<usize>,
    /// Weight window `max_degree,r_min,r_max` for `archimedean`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Extra specializations `u,v,x,y;...` for `formality`.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Document kind for `fixture`: package, algebra, diamond, mhs or dgla.
    #[arg(long)]
    kind: Option<String>,
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(args: Args) -> Result<i32, (i32, String)> {
    let input_error = |m: String| (2, m);
    if args.command == "fixture" {
        let name = args.input.or(args.fixture).ok_or_else(|| input_error("`fixture` needs a name".into()))?;
        let doc = cli::fixture_document(&name, args.kind.as_deref()).map_err(|e| input_error(e.to_string()))?;
        emit(&cli::document_to_json(&doc), &args.out).map_err(input_error)?;
        return Ok(0);
    }
    let command: Command = args.command.parse().map_err(|e: hodge_homotopy::Error| input_error(e.to_string()))?;
    let input = match (&args.input, &args.fixture) {
        (Some(p), None) => Input::Path(PathBuf::from(p)),
        (None, Some(f)) => Input::Fixture(f.clone()),
        _ => return Err(input_error("give exactly one of an input path and --fixture".into())),
    };
    let job = JobSpec {
        command,
        input,
        options: Options { n_max: args.n_max, window: args.window, points: args.points, fixture: args.fixture },
    };
    let report = cli::run(&job).map_err(|e| (cli::error_exit_code(&e), e.to_string()))?;
    emit(&report.to_json(), &args.out).map_err(input_error)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match std::panic::catch_unwind(|| execute(args)) {
        Ok(Ok(code)) => code,
        Ok(Err((code, msg))) => {
            eprintln!("error: {msg}");
            code
        }
        Err(_) => {
            eprintln!("error: internal failure");
            3
        }
    };
    ExitCode::from(code as u8)
}
