fn main() {
    std::process::exit(gaussmod_cli::run(std::env::args_os()));
}
