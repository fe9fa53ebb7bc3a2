fn main() {
    std::process::exit(ogs_core::harness::cli::run(std::env::args_os()));
}
