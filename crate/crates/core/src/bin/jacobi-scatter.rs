fn main() {
    std::process::exit(jacobi_scatter::cli::main_with_args(std::env::args_os()));
}
