use clap::Parser;

fn main() {
    std::process::exit(moutard_cli::run(moutard_cli::Cli::parse()));
}
