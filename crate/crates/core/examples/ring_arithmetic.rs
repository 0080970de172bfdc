//! Exact arithmetic in Z[ω] and D[ω]: constants, δ-division, least
//! δ-exponents and conjugation.

use std::fmt::Write;

use domega::ring::{delta, lambda, lambda_inv, sqrt2, CycInt, RingElem};

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let w = CycInt::omega_pow(1);
    writeln!(out, "omega = {w}, omega^8 = {}", CycInt::omega_pow(8)).unwrap();
    writeln!(out, "sqrt2 = {}, sqrt2^2 = {}", sqrt2(), &sqrt2() * &sqrt2()).unwrap();
    writeln!(out, "lambda * lambda^-1 = {}", &lambda() * &lambda_inv()).unwrap();

    // δ divides 2, and 2 / δ is exact.
    let two = CycInt::from_int(2);
    let q = two.delta_divide().expect("delta divides 2");
    writeln!(out, "2 / delta = {q}, check: {}", &q * &delta()).unwrap();

    // 1/√2 has least δ-exponent 2; the dyadic form is printed back.
    let half_root: RingElem = "(-1,0,1,0)/2".parse()?;
    writeln!(out, "1/sqrt2 = {half_root}, lde {}", half_root.lde()).unwrap();
    let square = &half_root * &half_root;
    writeln!(out, "(1/sqrt2)^2 = {square}").unwrap();

    let x = CycInt::new(1, 2, 3, 4);
    writeln!(
        out,
        "x = {x}, conj(x) = {}, x + conj(x) divisible by sqrt2: {}",
        x.conj(),
        domega::ring::check_add_conj(&x)
    )
    .unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
