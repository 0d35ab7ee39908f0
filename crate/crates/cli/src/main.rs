fn main() {
    std::process::exit(polyassoc_cli::commands::run(std::env::args_os()));
}
