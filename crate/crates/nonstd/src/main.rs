fn main() {
    std::process::exit(nonstd::cli::run(std::env::args_os()));
}
