use clap::Parser;

use divcorr_cli::{run_and_write, Command, Flags};

#[derive(Parser)]
#[command(name = "divcorr", version, about = "Divisor-function correlations along affine-linear systems")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

fn main() {
    let cli = Cli::parse();
    let result = cli
        .flags
        .resolve()
        .and_then(|cfg| run_and_write(cli.command, &cfg));
    match result {
        Ok(path) => println!("{}", path.display()),
        Err(e) => {
            let line = serde_json::json!({ "error": e.category(), "message": e.to_string() });
            eprintln!("{line}");
            std::process::exit(e.exit_code());
        }
    }
}
