use std::io;

use octic::cli::{run, ExpectationTable};

fn main() {
    let code = run(
        std::env::args_os(),
        &ExpectationTable::published(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
