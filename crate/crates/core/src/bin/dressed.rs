fn main() {
    std::process::exit(dressed::cli::run(std::env::args_os()));
}
