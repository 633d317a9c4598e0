fn main() {
    std::process::exit(qec5_cli::run_cli(std::env::args_os()));
}
