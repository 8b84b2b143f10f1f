use iongrover::decompose::{toffoli_n_cost, GateTemplate, SignMap};

fn main() -> iongrover::Result<()> {
    println!("{:>3} {:>4} {:>9}", "n", "XX", "ancillas");
    for n in 3..=12 {
        let c = toffoli_n_cost(n)?;
        println!("{:>3} {:>4} {:>9}", c.n, c.xx_count, c.ancilla_count);
    }
    // the formula against the two constructions that exist as circuits
    for (gate, n) in [(GateTemplate::Toffoli3, 3), (GateTemplate::Toffoli4, 4)] {
        let built = gate.build_default(&SignMap::new())?;
        assert_eq!(built.xx_count(), toffoli_n_cost(n)?.xx_count);
    }
    Ok(())
}
