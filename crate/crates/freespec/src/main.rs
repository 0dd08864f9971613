fn main() {
    std::process::exit(freespec::cli::run(std::env::args_os()));
}
