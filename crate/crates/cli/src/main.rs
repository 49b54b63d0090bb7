fn main() {
    std::process::exit(giant_atom_cli::run(std::env::args_os()));
}
