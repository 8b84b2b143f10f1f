//! The two native operations and a Bell pair from a single XX(π/4).
//!
//!     cargo run --example native_gates

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use iongrover::gates::{r_matrix, xx_matrix, Circuit};
use iongrover::state::{BasisLabel, StateVector};

fn main() -> iongrover::Result<()> {
    println!("R(pi, 0) =\n{:.3}", r_matrix(PI, 0.0));
    println!("XX(pi/4) =\n{:.3}", xx_matrix(FRAC_PI_4));

    let mut bell = Circuit::new(2);
    bell.xx(0, 1, FRAC_PI_4)?;
    let out = bell.run(&StateVector::zero(2)?)?;
    for (label, p) in out.probabilities().rows() {
        println!("P({label}) = {p:.3}");
    }

    // big-endian labels: qubit 0 is the leftmost bit
    let mut flip = Circuit::new(3);
    flip.rx(0, PI)?.ry(2, FRAC_PI_2)?;
    let start = StateVector::init_basis(3, &BasisLabel::parse("000")?)?;
    for (label, p) in flip.run(&start)?.probabilities().rows() {
        println!("P({label}) = {p:.3}");
    }

    println!("{}", bell.to_json()?);
    Ok(())
}
