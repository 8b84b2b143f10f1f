//! One Grover iteration for a single marked item, with both oracle styles,
//! followed by finite-shot sampling.
//!
//!     cargo run --example grover_single -- 101

use iongrover::grover::{run_grover, GroverConfig, OracleSpec, OracleStyle};
use iongrover::metrics::{asp, expected_grover_distribution, sso, Distribution};

fn main() -> iongrover::Result<()> {
    let label = std::env::args().nth(1).unwrap_or_else(|| "101".into());
    for style in [OracleStyle::Boolean, OracleStyle::Phase] {
        let spec = OracleSpec::parse(label.len(), &[label.as_str()], style)?;
        let result = run_grover(&GroverConfig::new(spec.clone()))?;
        let d = &result.data_distribution;
        println!(
            "{:<7} oracle: {} XX on {} qubits, ASP {:.5}",
            style.name(),
            result.circuit_xx_count,
            result.total_qubits,
            asp(d, spec.marked())?
        );

        let counts = d.sample(2000, 7)?;
        let measured = Distribution::from_counts(&counts)?;
        let expected = expected_grover_distribution(spec.n(), spec.marked())?;
        println!("  2000 shots: {counts:?}, SSO {:.4}", sso(&expected, &measured)?);
    }
    Ok(())
}
