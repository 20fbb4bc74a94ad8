fn main() {
    std::process::exit(bargmann3j::cli::run());
}
