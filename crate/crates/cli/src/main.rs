fn main() {
    std::process::exit(fqt_cli::main_with_args(std::env::args_os()));
}
