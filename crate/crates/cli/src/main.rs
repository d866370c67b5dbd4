fn main() {
    std::process::exit(vortex_sp_cli::main_with_args(std::env::args_os()));
}
