fn main() {
    std::process::exit(ocbt::cli::run(std::env::args_os()));
}
