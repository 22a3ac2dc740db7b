use clap::Parser;

fn main() {
    let cli = stark_spectra::Cli::parse();
    std::process::exit(stark_spectra::run(cli) as i32);
}
