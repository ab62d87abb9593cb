fn main() {
    std::process::exit(manifold_interior::cli::cli_main(std::env::args_os()));
}
