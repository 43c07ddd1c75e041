fn main() {
    std::process::exit(binomsum::cli::main_with_args(std::env::args_os()));
}
