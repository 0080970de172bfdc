//! Unitaries over D[ω]: generator application, levels, pivot columns and
//! the matrix file format.

use std::fmt::Write;

use domega::linalg::{GenMatrix, Generator};

pub fn run_example() -> domega::Result<String> {
    let mut out = String::new();
    let mut m = GenMatrix::identity(4);
    writeln!(out, "level(I) = {}", m.level()).unwrap();
    m.apply_generator(Generator::x(1, 2)?)?;
    writeln!(out, "level(X[1,2]) = {}", m.level()).unwrap();
    m.apply_generator(Generator::h(1, 2)?)?;
    m.apply_generator(Generator::w(2)?)?;
    m.apply_generator(Generator::h(2, 3)?)?;
    writeln!(out, "after H[1,2], w[2], H[2,3]: unitary {}, lde {}, level {}", m.is_unitary(), m.lde(), m.level())
        .unwrap();

    // The text format round-trips.
    let text = m.to_string();
    let back: GenMatrix = text.parse()?;
    writeln!(out, "matrix file:\n{text}round trip equal: {}", back == m).unwrap();

    // H is an involution, applied twice it is the identity again.
    let mut h = GenMatrix::identity(4);
    h.apply_generator(Generator::h(1, 2)?)?;
    h.apply_generator(Generator::h(1, 2)?)?;
    writeln!(out, "H[1,2]^2 = I: {}", h.is_identity()).unwrap();
    Ok(out)
}

#[allow(dead_code)]
fn main() -> domega::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
