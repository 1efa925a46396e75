fn main() {
    std::process::exit(sbcite::cli::run(std::env::args_os()));
}
