fn main() {
    std::process::exit(smdpath::cli::run());
}
