fn main() {
    std::process::exit(oproot::cli::run(std::env::args_os()));
}
