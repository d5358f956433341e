fn main() {
    std::process::exit(spheremap::cli::main_with_args(std::env::args().collect()));
}
