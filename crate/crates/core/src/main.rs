use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cycle_monoid::shell::{run_script, Session};

/// Command-line front end for signed words, pairing trees, lattice cosets
/// and punctured-plane loops.
#[derive(Parser, Debug)]
#[command(name = "cyclemon", version)]
struct Cli {
    /// Session file loaded before and saved after a successful command.
    #[arg(long)]
    session: Option<PathBuf>,

    /// Run every line of this file as a command and print the transcript.
    #[arg(long, conflicts_with = "command")]
    script: Option<PathBuf>,

    /// The command and its arguments, e.g. `inv "a+ b+"`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    command: Vec<String>,
}

fn load_session(path: Option<&PathBuf>) -> Result<Session, String> {
    match path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Session::from_text(&text).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => Ok(Session::default()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut session = match load_session(cli.session.as_ref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    if let Some(script) = &cli.script {
        let text = match std::fs::read_to_string(script) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", script.display());
                return ExitCode::from(1);
            }
        };
        let dir = script.parent().map(PathBuf::from).unwrap_or_default();
        session = session.with_base_dir(dir);
        let transcript = run_script(&mut session, &text);
        print!("{}", transcript.text);
        return ExitCode::from(transcript.first_failure.unwrap_or(0) as u8);
    }

    if cli.command.is_empty() {
        eprintln!("error: no command given (try `cyclemon inv \"a+ b+\"`)");
        return ExitCode::from(2);
    }
    let outcome = session.run(&cli.command);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    if outcome.code == 0 {
        if let Some(path) = &cli.session {
            if let Err(e) = std::fs::write(path, session.to_text()) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(outcome.code as u8)
}
