fn main() {
    std::process::exit(orn_core::cli::run(std::env::args_os()));
}
