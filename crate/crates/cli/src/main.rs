fn main() {
    std::process::exit(hyqoc_cli::run(std::env::args_os()));
}
