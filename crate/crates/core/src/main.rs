fn main() {
    std::process::exit(geoshear::cli::run(std::env::args_os()));
}
