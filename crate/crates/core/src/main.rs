fn main() {
    std::process::exit(qbessel::cli::run(std::env::args_os()));
}
