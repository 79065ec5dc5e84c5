fn main() {
    std::process::exit(fockgate::cli::run());
}
