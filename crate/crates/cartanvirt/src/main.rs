fn main() {
    std::process::exit(cartanvirt::cli::main());
}
