fn main() {
    std::process::exit(depsig_cli::run(std::env::args_os()));
}
