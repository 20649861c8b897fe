fn main() {
    std::process::exit(helmlearn::harness::cli_main(std::env::args_os()));
}
