fn main() {
    std::process::exit(frackin::cli::main_with_args(std::env::args_os()));
}
