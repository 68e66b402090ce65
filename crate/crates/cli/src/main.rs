use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cyclenf_cli::{execute, parse_error, schema, Command, JobSpec, Options, Report, Status};

#[derive(Parser)]
#[command(name = "cyclenf", version, about = "Normal forms of neighborhoods of cycles of rational curves")]
struct Cli {
    /// Print the JSON schema of job files and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Args, Clone)]
struct JobArgs {
    /// Input payload (or full job for `run`).
    #[arg(long)]
    input: PathBuf,
    /// Truncation order N.
    #[arg(long)]
    order: Option<usize>,
    /// Tolerance for residual checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave the wall time out of the report.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// Linearize node or cycle gluing data.
    Normalize(JobArgs),
    /// Calibrate K, solve the majorant and check domination.
    Majorant(JobArgs),
    /// Validate a Diophantine certificate.
    Diophantine(JobArgs),
    /// Product of nine normalized points.
    Ninepoints(JobArgs),
    /// First homology of a mapping torus.
    Homology(JobArgs),
    /// Orbit density of a rotation.
    Density(JobArgs),
    /// Pullback factor of the meromorphic 2-form.
    Twoform(JobArgs),
    /// Run a full job file.
    Run(JobArgs),
}

fn emit(report: &Report, output: Option<&Path>) -> ExitCode {
    let text = report.to_json();
    match output {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code as u8)
}

fn run(command: Option<Command>, args: JobArgs) -> ExitCode {
    let name = command.map_or("run", Command::name);
    let text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let mut r = Report::new(name);
            r.status = Status::InputError;
            r.exit_code = 1;
            r.notes.push(format!("cannot read {}: {e}", args.input.display()));
            return emit(&r, args.output.as_deref());
        }
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return emit(&parse_error(name, &e), args.output.as_deref()),
    };
    let mut opts = Options {
        order: args.order,
        tol: args.tol,
        timing: !args.no_timing,
    };
    let (command, input, output) = match command {
        Some(c) => (c, value, args.output),
        None => match serde_json::from_value::<JobSpec>(value) {
            Ok(job) => {
                opts.order = opts.order.or(job.order);
                opts.tol = opts.tol.or(job.tol);
                (job.command, job.input, args.output.or(job.output))
            }
            Err(e) => return emit(&parse_error(name, &e), args.output.as_deref()),
        },
    };
    let report = execute(command, &input, opts);
    emit(&report, output.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        println!("{}", serde_json::to_string_pretty(&schema::job_schema()).expect("schema serializes"));
        return ExitCode::SUCCESS;
    }
    let Some(sub) = cli.command else {
        eprintln!("no subcommand; see --help");
        return ExitCode::from(1);
    };
    match sub {
        Sub::Normalize(a) => run(Some(Command::Normalize), a),
        Sub::Majorant(a) => run(Some(Command::Majorant), a),
        Sub::Diophantine(a) => run(Some(Command::Diophantine), a),
        Sub::Ninepoints(a) => run(Some(Command::Ninepoints), a),
        Sub::Homology(a) => run(Some(Command::Homology), a),
        Sub::Density(a) => run(Some(Command::Density), a),
        Sub::Twoform(a) => run(Some(Command::Twoform), a),
        Sub::Run(a) => run(None, a),
    }
}
