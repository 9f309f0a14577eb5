fn main() {
    std::process::exit(acm_harness::cli_main(std::env::args_os()));
}
