fn main() {
    std::process::exit(nmrqc::cli::main());
}
