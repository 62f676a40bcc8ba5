use clap::Parser;

fn main() {
    let cli = boxprod_cli::Cli::parse();
    std::process::exit(boxprod_cli::execute(cli));
}
