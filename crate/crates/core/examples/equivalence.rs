//! Deciding whether two words denote the same matrix, with a proof of
//! equivalence when they do.

use std::fmt::Write;

use domega::rewrite::Engine;
use domega::words::{co_evaluating_variant, random_word, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let mut engine = Engine::new(4)?;
    let pairs = [("X[1,2] X[2,3]", "X[2,3] X[1,3]"), ("H[1,2]", "X[1,2]")];
    for (a, b) in pairs {
        let (w1, w2): (Word, Word) = (a.parse()?, b.parse()?);
        let (same, cert) = engine.decide_equiv(&w1, &w2, true)?;
        let proof = match cert {
            Some(c) => format!(", proof of {} steps", c.check()?.steps),
            None => String::new(),
        };
        writeln!(out, "`{a}` vs `{b}`: {}{proof}", if same { "equivalent" } else { "inequivalent" }).unwrap();
    }

    // A random word against a rewritten copy of itself.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w1 = random_word(&mut rng, 4, 6);
    let w2 = co_evaluating_variant(&mut rng, &w1, 4, 2);
    let (same, _) = engine.decide_equiv(&w1, &w2, false)?;
    writeln!(out, "`{w1}` vs `{w2}`: equivalent {same}").unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
