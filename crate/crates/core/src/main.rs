use std::process::ExitCode;

mod cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("MAXCOV_LOG", "warn")).init();
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(cli::dispatch(&args))
}
