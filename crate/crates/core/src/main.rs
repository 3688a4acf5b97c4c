use std::io::{stderr, stdout};

fn main() {
    // Deep expressions recurse; give the worker a generous stack.
    let code = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(|| unroll::cli::run(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock()))
        .expect("spawn worker thread")
        .join()
        .unwrap_or(101);
    std::process::exit(code);
}
