mod args;
mod commands;
mod error;
mod figures;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use error::{CliError, CliResult};
use output::OutputRecord;

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("EXKN_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("EXKN_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(cli: &Cli, rec: &OutputRecord) -> CliResult<()> {
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match cli.format {
        Format::Csv => rec.write_csv(&mut w, cli.precision)?,
        Format::Json => rec.write_json(&mut w, cli.precision)?,
    }
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    configure_threads()?;
    let mut failure = None;
    let rec = match &cli.command {
        Command::Vnm { n, m } => commands::vnm(*n, *m)?,
        Command::Law { atoms, n } => commands::law(atoms, *n)?,
        Command::RegionCheck(a) => commands::region_check(a)?,
        Command::VerifyExtremes { n, m_max } => {
            let (rec, all) = commands::verify(*n, *m_max)?;
            if !all {
                failure = Some(CliError::Verification(format!(
                    "some v_{{{n},m}} with m <= {m_max} are not extreme"
                )));
            }
            rec
        }
        Command::HullMember { law, n, m_max } => commands::hull_member(law, *n, *m_max)?,
        Command::SnTable { m_min, m_max } => commands::sn(*m_min, *m_max)?,
        Command::SharpBound { n } => commands::sharp(*n)?,
        Command::TwoParam(a) => commands::two_param(a)?,
        Command::Dual(a) => commands::dual(a)?,
        Command::Inverse(a) => commands::inverse(a)?,
        Command::Sample(a) => commands::sample(a)?,
        Command::Figure { id } => figures::figure(*id)?,
    };
    emit(cli, &rec)?;
    failure.map_or(Ok(()), Err)
}

fn report(err: &CliError) {
    let line = serde_json::json!({ "error": err.tag(), "message": err.to_string() });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            report(&CliError::Usage(first.to_string()));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(e.code() as u8)
        }
    }
}
