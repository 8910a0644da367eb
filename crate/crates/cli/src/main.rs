fn main() {
    std::process::exit(porplan_cli::run(std::env::args_os()));
}
