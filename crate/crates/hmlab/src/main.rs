fn main() {
    std::process::exit(hmlab::cli::parse_and_dispatch(std::env::args()));
}
