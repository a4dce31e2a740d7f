fn main() {
    std::process::exit(fisher_info::cli::main_with_args(std::env::args_os()));
}
