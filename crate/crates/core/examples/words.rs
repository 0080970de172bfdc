//! Generator words: parsing, printing, evaluation and rewriting into
//! basic generators.

use std::fmt::Write;

use domega::words::{to_basic_word, Word};

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let w: Word = "w[3] w[3] w[3] H[2,4] X[1,3]".parse()?;
    writeln!(out, "parsed: {w} ({} tokens, extent {})", w.len(), w.extent()).unwrap();
    let basic = to_basic_word(&w);
    writeln!(out, "basic: {basic}").unwrap();
    writeln!(out, "same matrix: {}", basic.evaluate(4)? == w.evaluate(4)?).unwrap();
    let inv = w.inverse();
    writeln!(out, "inverse: {inv}").unwrap();
    writeln!(out, "w · w⁻¹ = I: {}", w.concat(&inv).evaluate(4)?.is_identity()).unwrap();
    match "H[1,2".parse::<Word>() {
        Err(e) => writeln!(out, "bad input: {e}").unwrap(),
        Ok(_) => unreachable!("unclosed token"),
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
