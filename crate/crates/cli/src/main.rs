fn main() {
    std::process::exit(hyperkit_cli::run(std::env::args_os()));
}
