use clap::Parser;

fn main() {
    let cli = varbound::cli::Cli::parse();
    std::process::exit(varbound::cli::run(cli));
}
