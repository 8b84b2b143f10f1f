//! Builds every gate template from native operations, checks it against the
//! ideal unitary for each sign of the entangling angle, and prints its truth
//! table fidelity.

use iongrover::decompose::{
    equivalent_up_to_global_phase, restrict_clean_ancillas, rz_template, GateTemplate, SignMap,
};
use iongrover::metrics::{truth_table, truth_table_fidelity};

fn main() -> iongrover::Result<()> {
    for gate in GateTemplate::ALL {
        let circuit = gate.build_default(&SignMap::new())?;
        let k = gate.data_slots();
        let pairs: Vec<_> = circuit.xx_pairs().into_iter().collect();
        let mut ok = 0;
        let variants = SignMap::all_assignments(pairs.iter().copied());
        for signs in &variants {
            let c = gate.build_default(signs)?;
            let u = c.unitary()?;
            let ancillas: Vec<usize> = (k..c.n_qubits()).collect();
            let (u, leak) = restrict_clean_ancillas(&u, c.n_qubits(), &ancillas);
            let reference = gate.reference_unitary(&(0..k).collect::<Vec<_>>(), k);
            if leak < 1e-9 && equivalent_up_to_global_phase(&u, &reference, 1e-9)? {
                ok += 1;
            }
        }
        let io: Vec<usize> = (0..k).collect();
        let fid = truth_table_fidelity(&truth_table(&circuit, &io)?, &gate.ideal_permutation())?;
        println!(
            "{:<9} {:>2} XX on {} qubits, {}/{} sign choices exact, truth-table fidelity {fid:.6}",
            gate.name(),
            circuit.xx_count(),
            circuit.n_qubits(),
            ok,
            variants.len()
        );
    }

    let rz = rz_template(0.7, 0);
    println!("Rz(0.7) as {} rotations: {:?}", rz.len(), rz.gates());
    Ok(())
}
