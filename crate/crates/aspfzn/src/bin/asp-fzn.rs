fn main() {
    std::process::exit(aspfzn::cli::main_entry());
}
