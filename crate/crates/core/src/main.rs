fn main() {
    std::process::exit(frobzeta::cli::run(std::env::args_os()));
}
