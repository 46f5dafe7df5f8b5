fn main() {
    std::process::exit(limcyc::cli::run(std::env::args_os()));
}
