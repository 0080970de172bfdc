//! The two-qubit Clifford+T gates as 4×4 unitaries over D[ω], and a
//! generator word for each.

use std::fmt::Write;

use domega::linalg::{clifford_t_gates, GenMatrix};
use domega::synth::synthesize_traced;

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let gates = clifford_t_gates();
    for (name, m) in &gates {
        writeln!(out, "{name:>5}: {}", synthesize_traced(m)?.word()).unwrap();
    }
    let get = |n: &str| gates.iter().find(|g| g.0 == n).map(|g| g.1.clone()).expect("gate exists");
    writeln!(out, "T1 T1 = S1: {}", get("T1").mul(&get("T1"))? == get("S1")).unwrap();
    let mut p = GenMatrix::identity(4);
    for _ in 0..8 {
        p = p.mul(&get("OMEGA"))?;
    }
    writeln!(out, "OMEGA^8 = I: {}", p.is_identity()).unwrap();

    // A small circuit: CNOT after H on the first qubit.
    let bell = get("CNOT").mul(&get("H1"))?;
    writeln!(out, "CNOT H1 = {}", synthesize_traced(&bell)?.word()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
