use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use itsub::bcd::{bcd_search, from_bcd, to_bcd, DEFAULT_SEARCH_DEPTH};
use itsub::consistency::{consistent, self_consistent};
use itsub::harness::{run_suite, SuiteParams, SuiteReport, SUITES};
use itsub::syntax::{
    bcd_from_json, bcd_to_json, bcd_to_tree, derivation_from_json, derivation_to_json,
    derivation_to_tree,
};
use itsub::{check_sub, parse, trans_compose, Derivation, Ty};

#[derive(Parser)]
#[command(name = "itsub", version, about = "Intersection type subtyping without transitivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exit 0 if A <: B, 1 if not.
    Check { a: String, b: String },
    /// Print a certificate for A <: B.
    Derive {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bounded search for a derivation in the system with transitivity.
    Bcd {
        a: String,
        b: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
        max_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Translate a certificate file between the two systems.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Derive A <: B and B <: C, then compose them without a cut.
    Trans {
        a: String,
        b: String,
        c: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    Consistent { a: String, b: String },
    SelfConsistent { a: String },
    /// Run a property suite, or `all` of them.
    Suite {
        name: String,
        #[arg(long, default_value_t = 2)]
        atoms: u32,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
        search_depth: usize,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Bcd,
    New,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Json,
    Text,
}

const FALSE: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn ty(text: &str) -> Result<Ty, String> {
    parse(text).map_err(|e| format!("{text:?}: {e}"))
}

fn truth(b: bool) -> u8 {
    if b {
        println!("true");
        0
    } else {
        println!("false");
        FALSE
    }
}

fn show(d: &Derivation, format: Format) -> Result<(), String> {
    match format {
        Format::Json => println!("{}", derivation_to_json(d).map_err(|e| e.to_string())?),
        Format::Tree => print!("{}", derivation_to_tree(d)),
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Check { a, b } => Ok(truth(check_sub(&ty(&a)?, &ty(&b)?).is_some())),
        Command::Derive { a, b, format } => {
            let (a, b) = (ty(&a)?, ty(&b)?);
            match check_sub(&a, &b) {
                Some(d) => show(&d, format).map(|_| 0),
                None => {
                    eprintln!("{a} is not a subtype of {b}");
                    Ok(FALSE)
                }
            }
        }
        Command::Bcd {
            a,
            b,
            max_depth,
            format,
        } => match bcd_search(&ty(&a)?, &ty(&b)?, max_depth) {
            Some(d) => {
                match format {
                    Format::Json => println!("{}", bcd_to_json(&d).map_err(|e| e.to_string())?),
                    Format::Tree => print!("{}", bcd_to_tree(&d)),
                }
                Ok(0)
            }
            None => {
                println!("inconclusive");
                Ok(FALSE)
            }
        },
        Command::Translate { file, to } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("{}: {e}", file.display()))?;
            match to {
                Target::Bcd => {
                    let d = derivation_from_json(&text).map_err(|e| e.to_string())?;
                    let out = to_bcd(&d).map_err(|e| e.to_string())?;
                    println!("{}", bcd_to_json(&out).map_err(|e| e.to_string())?);
                }
                Target::New => {
                    let d = bcd_from_json(&text).map_err(|e| e.to_string())?;
                    let out = from_bcd(&d).map_err(|e| e.to_string())?;
                    println!("{}", derivation_to_json(&out).map_err(|e| e.to_string())?);
                }
            }
            Ok(0)
        }
        Command::Trans { a, b, c, format } => {
            let (a, b, c) = (ty(&a)?, ty(&b)?, ty(&c)?);
            let Some(d1) = check_sub(&a, &b) else {
                eprintln!("{a} is not a subtype of {b}");
                return Ok(FALSE);
            };
            let Some(d2) = check_sub(&b, &c) else {
                eprintln!("{b} is not a subtype of {c}");
                return Ok(FALSE);
            };
            let d = trans_compose(&d1, &d2).map_err(|e| e.to_string())?;
            show(&d, format).map(|_| 0)
        }
        Command::Consistent { a, b } => Ok(truth(consistent(&ty(&a)?, &ty(&b)?))),
        Command::SelfConsistent { a } => Ok(truth(self_consistent(&ty(&a)?))),
        Command::Suite {
            name,
            atoms,
            max_size,
            seed,
            jobs,
            samples,
            search_depth,
            report,
        } => {
            let params = SuiteParams {
                atoms,
                max_size,
                seed,
                samples,
                search_depth,
                jobs,
                ..SuiteParams::default()
            };
            let names: Vec<&str> = if name == "all" {
                SUITES.to_vec()
            } else {
                vec![name.as_str()]
            };
            let mut reports = Vec::new();
            for n in names {
                let r = run_suite(n, &params)
                    .map_err(|e| format!("{e}; expected one of: all, {}", SUITES.join(", ")))?;
                if let Report::Text = report {
                    print!("{}", r.to_text());
                    eprintln!("  wall time: {:.2?}", r.wall_time);
                }
                reports.push(r);
            }
            if let Report::Json = report {
                let values: Vec<&SuiteReport> = reports.iter().collect();
                if values.len() == 1 {
                    println!("{}", values[0].to_json());
                } else {
                    let body: Vec<String> = values.iter().map(|r| r.to_json()).collect();
                    println!("[{}]", body.join(",\n"));
                }
            }
            Ok(if reports.iter().all(SuiteReport::passed) { 0 } else { FALSE })
        }
    }
}
