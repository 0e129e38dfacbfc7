fn main() {
    std::process::exit(interaction_laws::cli::main_with(std::env::args_os()));
}
