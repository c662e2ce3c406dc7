fn main() {
    std::process::exit(mtc_forge::cli::run());
}
