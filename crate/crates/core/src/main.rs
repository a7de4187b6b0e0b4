fn main() {
    std::process::exit(nowicki::cli::run(std::env::args_os()));
}
