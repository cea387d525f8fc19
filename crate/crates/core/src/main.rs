fn main() {
    std::process::exit(aiecon::cli::run(std::env::args_os()));
}
