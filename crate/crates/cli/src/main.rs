fn main() {
    std::process::exit(ellstat_cli::run(std::env::args_os()));
}
