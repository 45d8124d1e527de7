fn main() {
    std::process::exit(ctps::cli::run(std::env::args_os()));
}
