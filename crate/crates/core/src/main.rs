fn main() {
    std::process::exit(ectrl::cli::main_with_args(std::env::args_os()));
}
