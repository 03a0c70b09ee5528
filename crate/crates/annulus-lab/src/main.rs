fn main() {
    std::process::exit(annulus_lab::cli::run(std::env::args_os()));
}
