fn main() {
    std::process::exit(ccspt::cli::main_from_env());
}
