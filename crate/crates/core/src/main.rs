fn main() {
    std::process::exit(gns_core::cli::run(std::env::args_os()));
}
