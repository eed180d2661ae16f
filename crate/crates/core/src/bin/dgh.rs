fn main() {
    std::process::exit(dghlab::cli::run(std::env::args_os()));
}
