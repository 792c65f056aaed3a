fn main() {
    std::process::exit(bowstate_cli::run(std::env::args_os()));
}
