fn main() {
    std::process::exit(am4rre_cli::main_with_env());
}
