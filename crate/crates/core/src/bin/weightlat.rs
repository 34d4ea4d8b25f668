fn main() {
    std::process::exit(weightlat::cli::run(std::env::args_os()));
}
