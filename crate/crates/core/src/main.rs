use std::process::ExitCode;

fn main() -> ExitCode {
    fourphoton::cli::main()
}
