fn main() {
    std::process::exit(lattes_pillow::cli::run(std::env::args_os()));
}
