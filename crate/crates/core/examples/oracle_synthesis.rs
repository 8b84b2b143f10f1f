//! Inspecting the synthesized oracles: gate counts per marked set and the
//! phase pattern a phase oracle imprints on the data register.

use iongrover::grover::{enumerate_oracles, oracle, OracleStyle};

fn main() -> iongrover::Result<()> {
    for style in [OracleStyle::Phase, OracleStyle::Boolean] {
        for spec in enumerate_oracles(3, 2, style)?.into_iter().take(6) {
            let c = oracle(&spec)?;
            let marked: Vec<String> = spec.marked().iter().map(|l| l.to_string()).collect();
            println!(
                "{:<7} {:?}: {} XX, {} gates, {} qubits",
                style.name(),
                marked,
                c.xx_count(),
                c.len(),
                c.n_qubits()
            );
        }
    }

    let spec = &enumerate_oracles(3, 1, OracleStyle::Phase)?[5];
    let u = oracle(spec)?.unitary()?;
    let d: Vec<String> = (0..8).map(|k| format!("{:+.0}", (u[(k, k)] / u[(0, 0)]).re)).collect();
    println!("phase oracle for {}: diag {}", spec.marked()[0], d.join(" "));
    Ok(())
}
