use std::io;

use qaclab::commands::Io;

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = qaclab::run(
        std::env::args_os(),
        &mut Io {
            out: &mut out,
            err: &mut err,
        },
    );
    std::process::exit(code);
}
