fn main() {
    std::process::exit(gmd_extremes::cli::run(std::env::args_os()));
}
