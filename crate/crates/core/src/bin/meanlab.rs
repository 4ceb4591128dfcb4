fn main() {
    std::process::exit(meanlab::cli::main_with_args(std::env::args_os()));
}
