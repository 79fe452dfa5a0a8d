fn main() {
    std::process::exit(redtraj::cli::main());
}
