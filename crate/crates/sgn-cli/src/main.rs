//! Binary entry point; all logic lives in the library crate.

fn main() {
    std::process::exit(sgn_cli::run_cli());
}
