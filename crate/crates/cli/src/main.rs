fn main() -> std::process::ExitCode {
    ehd_neutral::main_with_args()
}
