fn main() {
    std::process::exit(cbf_pursuit_cli::run_cli(std::env::args_os()));
}
