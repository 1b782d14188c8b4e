use clap::Parser;
use entropy_op_cli::config::{Cli, Command, Mode, RunConfig};
use entropy_op_cli::{commands, exit};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::VALIDATION
            } else {
                exit::SUCCESS
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (mode, args) = match &cli.command {
        Command::EntropyScan(a) => (Mode::EntropyScan, a),
        Command::Wigner(a) => (Mode::Wigner, a),
        Command::Verify(a) => (Mode::Verify, a),
    };
    let result = RunConfig::from_args(mode, args).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(()) => std::process::exit(exit::SUCCESS),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
