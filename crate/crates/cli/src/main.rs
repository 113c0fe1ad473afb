use clap::Parser;

fn main() {
    let cli = choreo_cli::Cli::parse();
    std::process::exit(choreo_cli::run(cli));
}
