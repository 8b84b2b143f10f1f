//! Readout errors with neighbor crosstalk, then correction by inverting the
//! confusion matrix.

use iongrover::grover::{run_grover, GroverConfig, OracleSpec, OracleStyle};
use iongrover::metrics::asp;
use iongrover::noise::{apply_spam, confusion_matrix, correct_spam, SpamModel};

fn main() -> iongrover::Result<()> {
    let spam = SpamModel::new(0.015, 0.02, 0.01)?;
    println!("2-qubit confusion matrix:\n{:.4}", confusion_matrix(&spam, 2)?);

    let spec = OracleSpec::parse(3, &["011"], OracleStyle::Phase)?;
    let ideal = run_grover(&GroverConfig::new(spec.clone()))?.data_distribution;
    let raw = apply_spam(&ideal, &spam)?;
    let fixed = correct_spam(&raw, &spam)?;
    println!("ASP ideal {:.5}", asp(&ideal, spec.marked())?);
    println!("ASP raw   {:.5}", asp(&raw, spec.marked())?);
    println!("ASP fixed {:.5}", asp(&fixed, spec.marked())?);

    let shots = raw.sample(1000, 1)?;
    let sampled = iongrover::metrics::Distribution::from_counts(&shots)?;
    println!("ASP from 1000 shots, corrected {:.4}", asp(&correct_spam(&sampled, &spam)?, spec.marked())?);
    Ok(())
}
