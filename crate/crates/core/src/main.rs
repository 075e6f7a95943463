fn main() {
    std::process::exit(sagnac_wva::cli::run(std::env::args_os()));
}
