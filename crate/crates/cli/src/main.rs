fn main() {
    std::process::exit(ipsforge::run(std::env::args_os()));
}
