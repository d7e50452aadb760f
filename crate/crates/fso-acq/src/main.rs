fn main() {
    std::process::exit(fso_acq::cli::main());
}
