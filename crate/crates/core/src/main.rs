fn main() {
    std::process::exit(nilsep::cli::run(std::env::args_os()));
}
