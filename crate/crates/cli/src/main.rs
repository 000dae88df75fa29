use clap::Parser;

fn main() {
    let cli = sliding_cli::Cli::parse();
    std::process::exit(sliding_cli::run(cli));
}
