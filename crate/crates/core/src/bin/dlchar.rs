fn main() {
    std::process::exit(dlchar::cli::run(std::env::args_os()));
}
