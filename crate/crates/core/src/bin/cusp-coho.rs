fn main() {
    std::process::exit(cusp_coho::cli::run_from(std::env::args_os()));
}
