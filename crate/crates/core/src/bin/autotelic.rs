fn main() -> std::process::ExitCode {
    autotelic::cli::main()
}
