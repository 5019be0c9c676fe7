fn main() {
    std::process::exit(stefan_pp::cli::main_with(std::env::args_os()));
}
