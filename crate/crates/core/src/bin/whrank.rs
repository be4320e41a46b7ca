fn main() -> std::process::ExitCode {
    whrank::cli::main()
}
