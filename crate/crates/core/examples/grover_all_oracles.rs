//! All 8 single-solution and 28 two-solution oracles on three qubits,
//! compared with the analytic and classical success probabilities.

use iongrover::experiments::{grover_all, RunOptions};
use iongrover::grover::OracleStyle;

fn main() -> iongrover::Result<()> {
    let opts = RunOptions::noiseless();
    for t in 1..=2 {
        for style in [OracleStyle::Boolean, OracleStyle::Phase] {
            let report = grover_all(3, t, style, &opts)?;
            let s = report.summary.as_ref().expect("summary");
            let xx: Vec<usize> = report.rows.iter().map(|r| r.xx_count).collect();
            println!(
                "t={t} {:<7}: {} oracles, mean ASP {:.5} (theory {:.5}, classical {:.5}), XX per circuit {}..={}",
                style.name(),
                s.count,
                s.mean_asp,
                s.theoretical_asp,
                s.classical_asp,
                xx.iter().min().unwrap(),
                xx.iter().max().unwrap()
            );
        }
    }
    Ok(())
}
