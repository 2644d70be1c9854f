fn main() {
    std::process::exit(noodle_core::cli::run(std::env::args_os()));
}
