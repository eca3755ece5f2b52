fn main() {
    std::process::exit(qlap::cli::run(std::env::args_os()));
}
