use clap::Parser;

fn main() {
    let cli = exlag_cli::Cli::parse();
    std::process::exit(exlag_cli::run(&cli));
}
