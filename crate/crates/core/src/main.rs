fn main() {
    std::process::exit(sidlab::cli::main());
}
