fn main() -> std::process::ExitCode {
    layercast::cli::main()
}
