fn main() {
    std::process::exit(ccnet_cli::run(std::env::args_os()));
}
