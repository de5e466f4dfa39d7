fn main() {
    std::process::exit(kroger_stability::harness::main_with_args(std::env::args_os()));
}
