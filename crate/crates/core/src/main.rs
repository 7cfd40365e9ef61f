fn main() {
    std::process::exit(stolarsky::cli::main());
}
