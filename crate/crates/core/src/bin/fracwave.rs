fn main() {
    std::process::exit(fracwave::cli::run_from_args(std::env::args_os()));
}
