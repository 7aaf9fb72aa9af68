use std::net::SocketAddr;
use std::process::ExitCode;

use clap::Parser;

use hopf_atlas::cli::{self, Cli, Command, EXIT_IO, EXIT_PARSE};
use hopf_atlas::Tolerances;

fn fail(code: i32, message: &str) -> ExitCode {
    eprintln!("hopf-atlas: {message}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = Tolerances::from_env() {
        return fail(EXIT_PARSE, &e.to_string());
    }

    match &cli.command {
        Command::Serve(args) => {
            let addr = SocketAddr::new(args.host, args.port);
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => return fail(EXIT_IO, &format!("cannot start runtime: {e}")),
            };
            match runtime.block_on(hopf_atlas::service::serve(addr, args.assets.clone())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(EXIT_IO, &format!("server error: {e}")),
            }
        }
        Command::Fiber(args) if args.out.is_some() => {
            let path = args.out.as_ref().expect("checked above");
            match cli::cmd_fiber(args) {
                Ok(text) => match std::fs::write(path, text) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(EXIT_IO, &format!("cannot write {}: {e}", path.display())),
                },
                Err(e) => fail(e.code, &e.message),
            }
        }
        command => match cli::run(command) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e.code, &e.message),
        },
    }
}
