fn main() {
    std::process::exit(mrm::cli::run(std::env::args_os()));
}
