use clap::Parser;
use lowlying::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok((_, code)) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
