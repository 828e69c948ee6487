fn main() {
    std::process::exit(linematch::cli::run(std::env::args_os()));
}
