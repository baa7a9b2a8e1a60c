use clap::Parser;

fn main() {
    let cli = sqsynth::cli::Cli::parse();
    let code = sqsynth::cli::run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
