fn main() {
    std::process::exit(qchar::cli::run());
}
