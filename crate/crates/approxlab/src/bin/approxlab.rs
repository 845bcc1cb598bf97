//! Thin binary wrapper: all behavior lives in [`approxlab::cli`].

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(approxlab::cli::run(std::env::args()) as u8)
}
