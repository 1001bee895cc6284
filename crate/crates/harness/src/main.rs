fn main() {
    std::process::exit(plasment_harness::cli::main_with_args(std::env::args_os()));
}
