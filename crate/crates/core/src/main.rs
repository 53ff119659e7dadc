fn main() {
    std::process::exit(chronos::cli::run(std::env::args_os()));
}
