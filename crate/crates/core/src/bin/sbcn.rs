fn main() -> std::process::ExitCode {
    sbcn::cli::run(std::env::args_os())
}
