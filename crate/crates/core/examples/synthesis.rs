//! Exact synthesis: reduce a unitary to the identity one syllable at a
//! time, watching the level fall, then read off a word for it.

use std::fmt::Write;

use domega::synth::{syllables_to_word, synthesize_traced};
use domega::words::Word;

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let w: Word = "H[1,2] w[2] H[2,3] X[1,4] H[3,4] w^3[4] H[1,3]".parse()?;
    let m = w.evaluate(4)?;
    let syn = synthesize_traced(&m)?;
    for (s, level) in syn.syllables.iter().zip(&syn.levels) {
        writeln!(out, "level {level}: apply {s}").unwrap();
    }
    let inverse = syllables_to_word(&syn.syllables);
    writeln!(out, "reduces to I: {}", inverse.evaluate(4)?.mul(&m)?.is_identity()).unwrap();
    let word = syn.word();
    writeln!(out, "word for M: {word}").unwrap();
    writeln!(out, "same matrix as the input: {}", word.evaluate(4)? == m).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
