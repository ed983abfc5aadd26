fn main() {
    std::process::exit(nambu_core::cli::run(std::env::args_os()));
}
