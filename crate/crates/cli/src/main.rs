use std::io::Write;
use std::process::ExitCode;

use oddtors_cli::{render_human, run, wants_human};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let (code, out) = run(&argv);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = match out {
        Ok(report) => {
            if let Some(err) = report.results.get("error").and_then(|e| e.as_str()) {
                eprintln!("error: {err}");
            }
            if wants_human(&argv) {
                write!(stdout, "{}", render_human(&report))
            } else {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))
            }
        }
        Err(msg) if code == 0 => write!(stdout, "{msg}"),
        Err(msg) => {
            eprint!("{msg}");
            Ok(())
        }
    };
    ExitCode::from(code as u8)
}
