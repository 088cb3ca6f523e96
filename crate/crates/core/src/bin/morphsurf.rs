fn main() {
    std::process::exit(morphsurf::cli::main_with_args(std::env::args_os()));
}
