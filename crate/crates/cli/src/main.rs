fn main() {
    std::process::exit(starlab_cli::run(std::env::args_os()));
}
