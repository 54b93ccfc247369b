//! Command-line front end: parse instance files, run a command, print the
//! certificate (canonical JSON by default, a summary with --human), and
//! exit 0 for Pass, 1 for Fail, 2 for Unknown or budget exhaustion, and 3
//! for malformed input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mukit::cert::{self, Certificate, EngineChoice, Outcome};
use mukit::initial::SubLfpEngine;
use mukit::Error;

#[derive(Parser)]
#[command(name = "mukit", version, about = "Fixed-point engines, initial algebras, and order-enriched checks with witness-carrying certificates")]
struct Cli {
    /// Print a readable summary instead of the certificate JSON.
    #[arg(long, global = true)]
    human: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Least fixed point of a monotone endomap (kind: poset_map, dom = cod).
    Fixpoint {
        /// kleene | zermelo | tarski | pataraia | monoid | all
        #[arg(long, default_value = "all")]
        engine: String,
        file: PathBuf,
    },
    /// Unique coalgebra-to-algebra morphism for a well-founded coalgebra.
    Hylo {
        coalgebra: PathBuf,
        algebra: PathBuf,
    },
    /// Iterate the initial-algebra chain of a functor.
    Chain {
        #[arg(long, default_value_t = 6)]
        budget: usize,
        file: PathBuf,
    },
    /// Initial algebra from a pre-fixed point via the subobject lattice.
    InitialAlgebra {
        /// pataraia | zermelo
        #[arg(long, default_value = "pataraia")]
        via: String,
        file: PathBuf,
    },
    /// Run both constructions and compare them.
    CrossValidate {
        #[arg(long, default_value_t = 6)]
        budget: usize,
        file: PathBuf,
    },
    /// Colimit characterization for a directed diagram of embeddings.
    VerifyColimit { file: PathBuf },
    /// Smoothness of a directed subset family (finite sets or embeddings).
    CheckSmooth { file: PathBuf },
    /// Directed join of finite metric subspaces.
    MetricJoin { file: PathBuf },
    /// Re-verify a certificate without re-running any search.
    Recheck {
        certificate: PathBuf,
        /// Original input files, in certificate order, to re-hash.
        files: Vec<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

fn file_name(path: &PathBuf) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn human_summary(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{}: {}\n",
        cert.command,
        match cert.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Unknown => "UNKNOWN",
        }
    ));
    for rec in &cert.inputs {
        out.push_str(&format!("  input {} sha256 {}\n", rec.name, &rec.sha256[..16]));
    }
    for (k, v) in &cert.flags {
        out.push_str(&format!("  flag {k} = {v}\n"));
    }
    if !cert.witnesses.is_null() {
        out.push_str(&format!(
            "  witnesses: {}\n",
            serde_json::to_string(&cert.witnesses).unwrap_or_default()
        ));
    }
    if !cert.counterexamples.is_null() {
        out.push_str(&format!(
            "  counterexamples: {}\n",
            serde_json::to_string(&cert.counterexamples).unwrap_or_default()
        ));
    }
    out
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    let cert = match &cli.command {
        Command::Fixpoint { engine, file } => {
            let choice = EngineChoice::parse(engine)?;
            cert::run_fixpoint(choice, &file_name(file), &read(file)?)?
        }
        Command::Hylo { coalgebra, algebra } => cert::run_hylo(
            &file_name(coalgebra),
            &read(coalgebra)?,
            &file_name(algebra),
            &read(algebra)?,
        )?,
        Command::Chain { budget, file } => {
            cert::run_chain(*budget, &file_name(file), &read(file)?)?
        }
        Command::InitialAlgebra { via, file } => {
            let engine = match via.as_str() {
                "pataraia" => SubLfpEngine::Pataraia,
                "zermelo" => SubLfpEngine::Zermelo,
                other => {
                    return Err(Error::Schema(format!("unknown engine `{other}`")));
                }
            };
            cert::run_initial_algebra(engine, &file_name(file), &read(file)?)?
        }
        Command::CrossValidate { budget, file } => {
            cert::run_cross_validate(*budget, &file_name(file), &read(file)?)?
        }
        Command::VerifyColimit { file } => {
            cert::run_verify_colimit(&file_name(file), &read(file)?)?
        }
        Command::CheckSmooth { file } => {
            cert::run_check_smooth(&file_name(file), &read(file)?)?
        }
        Command::MetricJoin { file } => {
            cert::run_metric_join(&file_name(file), &read(file)?)?
        }
        Command::Recheck { certificate, files } => {
            let cert = Certificate::parse(&read(certificate)?)?;
            let contents = files
                .iter()
                .map(|f| Ok((file_name(f), read(f)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let report = cert::recheck(&cert, &contents)?;
            if cli.human {
                println!(
                    "recheck: {} ({})",
                    if report.ok { "PASS" } else { "FAIL" },
                    report.detail
                );
            } else {
                println!(
                    "{}",
                    serde_json::to_string(&report)
                        .map_err(|e| Error::Schema(e.to_string()))?
                );
            }
            return Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    };
    if cli.human {
        print!("{}", human_summary(&cert));
    } else {
        println!("{}", cert.to_canonical_string()?);
    }
    Ok(ExitCode::from(cert.outcome.exit_code() as u8))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            // cap and budget exhaustion are honest unknowns, not input errors
            if e.is_cap() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
