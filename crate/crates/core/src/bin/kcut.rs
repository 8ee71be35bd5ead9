fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("KCUT_LOG", "error")).init();
    let code = kcut_core::cli::run_cli(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
