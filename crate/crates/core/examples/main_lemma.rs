//! One step of the commutation argument: moving a basic generator past
//! the normal edge at a state, with the case that applies and its proof.

use std::fmt::Write;

use domega::rewrite::{basic_generators, main_lemma_step, normal_word};
use domega::words::Word;

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let state = "H[1,2] w[2] H[2,3]".parse::<Word>()?.evaluate(4)?;
    writeln!(out, "state normal word: {}", normal_word(&state)?).unwrap();
    for g in basic_generators(4) {
        let step = main_lemma_step(&state, g)?;
        step.cert.check()?;
        let n_prime: Vec<String> = step.n_prime.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "{g}: case {}, N' = [{}], G' = `{}`, proof {} steps",
            step.case,
            n_prime.join(", "),
            step.g_prime,
            step.cert.steps.len()
        )
        .unwrap();
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
