fn main() {
    std::process::exit(qtransduce::cli::run(std::env::args_os()));
}
