fn main() {
    std::process::exit(qmorph::cli::run(std::env::args_os()));
}
