fn main() {
    std::process::exit(coarseplane::cli::run(std::env::args_os()));
}
