fn main() {
    std::process::exit(telegraph::cli::main_with_args(std::env::args_os()));
}
