fn main() {
    std::process::exit(fitzrep::cli::main_with_args(std::env::args_os()));
}
