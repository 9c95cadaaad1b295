use clap::Parser;

fn main() {
    let cli = xvol::cli::Cli::parse();
    std::process::exit(xvol::cli::run(cli));
}
