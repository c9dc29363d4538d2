//! The command-line interface driven in-process.

use qnoether::cli::run_command;

fn main() {
    let dir = qnoether::corpus::default_dir();
    let ex1 = dir.join("ex1.sys").display().to_string();
    let runs: [&[&str]; 4] = [
        &["--no-timing", "check", "cosymmetry", "--system", &ex1, "--beta", "-u[x,x]"],
        &["--no-timing", "check", "symmetry", "--system", &ex1, "--alpha", "u[t]"],
        &["euler", "--system", &ex1, "--expr", "u*u[x]^2"],
        &["adjoint", "--system", &ex1],
    ];
    for args in runs {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        let code = run_command(&args, &mut out);
        println!("$ qnoether {}\n{}exit {code}\n", args.join(" "), String::from_utf8_lossy(&out));
    }
}
