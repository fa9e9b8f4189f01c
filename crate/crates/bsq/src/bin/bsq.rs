fn main() {
    std::process::exit(bsq::cli::main_from_env());
}
