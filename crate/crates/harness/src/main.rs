fn main() {
    std::process::exit(encdec_harness::cli::main_with_args(std::env::args_os()));
}
