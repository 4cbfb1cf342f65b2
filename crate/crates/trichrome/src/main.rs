fn main() {
    let code = trichrome::cli::run(std::env::args().skip(1));
    std::process::exit(code);
}
