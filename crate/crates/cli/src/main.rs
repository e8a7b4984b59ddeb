use std::io::Write;

fn main() {
    let result = deodhar_cli::run(std::env::args_os());
    print!("{}", result.stdout());
    std::io::stdout().flush().ok();
    eprint!("{}", result.stderr());
    std::process::exit(result.exit_code);
}
