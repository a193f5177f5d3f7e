use std::process::ExitCode;

use sqed_cli::{output_dir_from_env, run_scenario, unit_report, CliError, RunConfig};

fn main() -> ExitCode {
    let matches = match sqed_cli::config::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if matches.get_flag("unit-report") {
        print!("{}", unit_report());
    }
    let result = RunConfig::from_matches(&matches, output_dir_from_env()).and_then(|cfg| match cfg {
        Some(cfg) => run_scenario(&cfg).map(Some),
        None if matches.get_flag("unit-report") => Ok(None),
        None => Err(CliError::Usage("no scenario given (see --help)".into())),
    });
    match result {
        Ok(Some(line)) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
