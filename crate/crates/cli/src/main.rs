use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = cliffcomp::run(std::env::args_os());
    if let Some(v) = &out.stdout {
        let text = match v {
            serde_json::Value::String(s) => s.clone(),
            v => serde_json::to_string_pretty(v).expect("json"),
        };
        // a closed pipe is not an error for us
        let _ = writeln!(std::io::stdout(), "{text}");
    }
    if let Some(e) = &out.stderr {
        let _ = writeln!(std::io::stderr(), "{e}");
    }
    ExitCode::from(out.code as u8)
}
