//! Depolarizing noise after every XX gate, fitted to a 0.896 Toffoli-3
//! truth-table fidelity and then applied to the larger circuits.

use iongrover::decompose::{GateTemplate, SignMap};
use iongrover::experiments::{anchors, grover_all, NoiseSettings, RunOptions};
use iongrover::grover::OracleStyle;
use iongrover::metrics::truth_table_fidelity;
use iongrover::noise::noisy_truth_table;

fn main() -> iongrover::Result<()> {
    let settings = NoiseSettings::fitted(1)?;
    let noise = settings.model;
    println!("fitted p_xx = {:.4}", noise.p_xx);

    for (gate, hw) in
        [(GateTemplate::Toffoli3, anchors::TOFFOLI3_FIDELITY), (GateTemplate::Toffoli4, anchors::TOFFOLI4_FIDELITY)]
    {
        let c = gate.build_default(&SignMap::new())?;
        let io: Vec<usize> = (0..gate.data_slots()).collect();
        let tt = noisy_truth_table(&c, &io, &noise, settings.trajectories, 1)?;
        let f = truth_table_fidelity(&tt, &gate.ideal_permutation())?;
        println!("{:<9} fidelity {f:.3} (hardware {hw})", gate.name());
    }

    let opts = RunOptions { noise: Some(settings), seed: 1, ..Default::default() };
    for t in 1..=2 {
        for style in [OracleStyle::Boolean, OracleStyle::Phase] {
            let s = grover_all(3, t, style, &opts)?.summary.expect("summary");
            println!(
                "t={t} {:<7} mean ASP {:.3} (hardware {:?}, classical {:.3})",
                style.name(),
                s.mean_asp,
                s.hardware_value,
                s.classical_asp
            );
        }
    }
    Ok(())
}
