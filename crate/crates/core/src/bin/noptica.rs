fn main() {
    std::process::exit(noptica::cli::dispatch(std::env::args_os()));
}
