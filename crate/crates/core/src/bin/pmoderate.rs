fn main() {
    std::process::exit(pmoderate::cli::main_with_args(std::env::args_os()));
}
