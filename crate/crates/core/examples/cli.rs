//! Driving the command-line verbs in-process: each call returns the exit
//! code and the text the binary would print.

use std::fmt::Write;

use domega::cli::run;

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let calls: [&[&str]; 6] = [
        &["eval", "X[1,2]"],
        &["normalize", "H[1,2] X[1,2]"],
        &["equiv", "X[1,2] X[2,3]", "X[2,3] X[1,3]"],
        &["equiv", "H[1,2]", "X[1,2]"],
        &["random", "--length", "5", "--seed", "1"],
        &["normalize", "H[1,5]"],
    ];
    for args in calls {
        let o = run(std::iter::once("domega").chain(args.iter().copied()));
        writeln!(out, "$ domega {}  [exit {}]", args.join(" "), o.code).unwrap();
        out.push_str(&o.stdout);
        out.push_str(&o.stderr);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
