fn main() {
    std::process::exit(mimo_cli::run(std::env::args_os()));
}
