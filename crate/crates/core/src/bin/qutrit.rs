fn main() {
    std::process::exit(qutrit_bloch::cli::run(std::env::args_os()));
}
