use clap::Parser;

fn main() {
    let cli = hqc::Cli::parse();
    std::process::exit(hqc::execute(&cli));
}
