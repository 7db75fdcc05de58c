fn main() {
    std::process::exit(chaoscrypt::cli::run(std::env::args_os()));
}
