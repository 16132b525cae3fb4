fn main() {
    std::process::exit(athermal_cli::run(std::env::args_os()));
}
