fn main() {
    std::process::exit(groupdiff::cli::main_with_args(std::env::args_os()));
}
