fn main() {
    std::process::exit(geocur::cli::run_from(std::env::args_os()));
}
