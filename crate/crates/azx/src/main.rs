use std::io::Write;

fn main() {
    let seed = std::env::var("ZX_SEED").ok();
    let out = azx::run(std::env::args_os(), seed.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
