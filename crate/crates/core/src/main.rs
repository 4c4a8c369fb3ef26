fn main() {
    std::process::exit(cutblock::cli::main_with_args(std::env::args_os()));
}
