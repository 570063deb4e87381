fn main() {
    std::process::exit(rico::cli::run(std::env::args_os()));
}
