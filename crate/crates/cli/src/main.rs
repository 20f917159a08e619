use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use nnsft_cli::args::Format;
use nnsft_cli::{execute, table, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's own failure code would collide with "refuted"
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("input error: --threads must be positive");
            return ExitCode::from(4);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot start the thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let (report, code) = execute(&cli, &argv);
    if let Some(err) = report.result.get("error") {
        eprintln!("{}", err.as_str().unwrap_or_default());
    }
    let text = match cli.format {
        Format::Json => serde_json::to_string(&report).expect("reports serialize") + "\n",
        Format::Table => table(&report),
    };
    // a closed pipe (e.g. `| head`) is the reader's choice, not a failure
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("cannot write the report: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code as u8)
}
