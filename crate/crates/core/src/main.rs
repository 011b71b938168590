fn main() {
    std::process::exit(kinconv::cli::run(std::env::args_os()));
}
