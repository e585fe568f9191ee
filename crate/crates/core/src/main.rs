fn main() {
    std::process::exit(qstancu::cli::run());
}
