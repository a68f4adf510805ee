fn main() {
    std::process::exit(ruinkit::cli::main_impl());
}
