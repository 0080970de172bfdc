//! The self-test report, and the same report after one rule has been
//! deliberately broken.

use domega::cli::selftest;

pub fn run_example() -> domega::Result<String> {
    let good = selftest(Some(4), None);
    let bad = selftest(Some(4), Some(18));
    Ok(format!("exit {}\n{}with rule 18 broken: exit {}\n{}", good.code, good.stdout, bad.code, bad.stdout))
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
