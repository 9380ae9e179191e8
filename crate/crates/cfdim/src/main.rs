fn main() {
    std::process::exit(cfdim::cli::main());
}
