fn main() {
    std::process::exit(malus_hv::cli::run(std::env::args_os()));
}
