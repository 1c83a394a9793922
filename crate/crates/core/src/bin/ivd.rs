fn main() {
    std::process::exit(ivd_core::cli::run(std::env::args_os()));
}
