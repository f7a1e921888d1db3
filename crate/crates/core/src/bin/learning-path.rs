fn main() {
    std::process::exit(learning_path::cli::main());
}
