fn main() {
    std::process::exit(incknap_cli::run(std::env::args_os()));
}
