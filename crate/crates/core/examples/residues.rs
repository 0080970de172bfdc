//! Residues modulo powers of δ, and the ω-exponent of odd elements
//! modulo δ³.

use std::fmt::Write;

use domega::ring::{enumerate_residue_classes, omega_exponent_mod_delta3, residue, residue_representatives, CycInt};

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    for p in 1..=3 {
        let reps: Vec<String> = residue_representatives(p).iter().map(ToString::to_string).collect();
        let found = enumerate_residue_classes(p).len();
        writeln!(out, "Z[w]/delta^{p}: {found} classes, representatives {}", reps.join(" ")).unwrap();
    }
    let x = CycInt::new(3, -1, 4, 1);
    for p in 1..=3 {
        writeln!(out, "{x} mod delta^{p} = {}", residue(&x, p)?.rep).unwrap();
    }
    let odd = CycInt::new(0, 0, 2, 1);
    writeln!(out, "{odd} = w^{} (mod delta^3)", omega_exponent_mod_delta3(&odd)?).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
