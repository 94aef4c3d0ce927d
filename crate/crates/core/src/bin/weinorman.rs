fn main() {
    std::process::exit(weinorman::cli::run(std::env::args_os()));
}
