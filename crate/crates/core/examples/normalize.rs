//! Normal forms with certificates: the normal form depends only on the
//! matrix, and the certificate replays over the defining relations.

use std::fmt::Write;

use domega::rewrite::Engine;
use domega::words::Word;

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let mut engine = Engine::new(4)?;
    for text in ["X[1,2] X[1,2]", "H[1,2] X[1,2]", "w[3] H[2,3] w[2] H[1,4]"] {
        let w: Word = text.parse()?;
        let norm = engine.normalize(&w, true)?;
        let cert = norm.cert.expect("certificate requested");
        let stats = cert.check()?;
        writeln!(
            out,
            "{text:<26} -> `{}`  ({} steps, rules {:?})",
            norm.normal_form,
            stats.steps,
            stats.histogram.keys().collect::<Vec<_>>()
        )
        .unwrap();
    }

    // A short derivation printed in the file format.
    let w: Word = "H[1,2] X[1,2]".parse()?;
    let cert = engine.normalize(&w, true)?.cert.expect("certificate requested");
    let mut text = Vec::new();
    cert.write_text(&mut text)?;
    write!(out, "derivation file:\n{}", String::from_utf8_lossy(&text)).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
