use std::process::ExitCode;

fn main() -> ExitCode {
    votepower::cli::main_entry()
}
