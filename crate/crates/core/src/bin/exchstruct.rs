fn main() {
    std::process::exit(exchstruct::cli::main_with_args(std::env::args_os()));
}
