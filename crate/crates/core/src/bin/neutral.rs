fn main() {
    std::process::exit(inclusion_neutrality::cli::run(std::env::args_os()));
}
