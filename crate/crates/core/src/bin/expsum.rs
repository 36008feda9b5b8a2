fn main() {
    std::process::exit(expsum::cli::dispatch(std::env::args_os()));
}
