use clap::Parser;

use defquant::cli::{run, Cli, Format, Status};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let rendered = outcome.render(cli.format);
    if outcome.status == Status::Error && cli.format == Format::Text {
        eprintln!("{rendered}");
    } else {
        println!("{rendered}");
    }
    std::process::exit(outcome.exit_code);
}
