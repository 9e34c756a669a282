use std::process::ExitCode;

fn main() -> ExitCode {
    record_collector::cli::run()
}
