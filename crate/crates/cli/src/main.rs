use clap::Parser;

fn main() {
    let cli = wflow_cli::Cli::parse();
    std::process::exit(wflow_cli::run(&cli));
}
