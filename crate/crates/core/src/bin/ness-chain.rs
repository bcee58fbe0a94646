fn main() {
    std::process::exit(ness_chain::cli::run(std::env::args_os()));
}
