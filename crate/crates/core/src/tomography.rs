//! Limited tomography of a three-qubit Toffoli.
//!
//! All three ions get a global `Ry(+π/2)` when the input's last bit is 0 and
//! `Ry(−π/2)` when it is 1, both before and after the gate under test. For a
//! phase-correct Toffoli the resulting 8×8 truth table is anti-diagonal.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::metrics::{self, Distribution, TruthTable};
use crate::noise::{self, NoiseModel};
use crate::state::{qubit_mask, StateVector};

const IO: [usize; 3] = [0, 1, 2];

fn check_circuit(circuit: &Circuit) -> Result<()> {
    if circuit.n_qubits() < 3 {
        return Err(Error::Dimension { expected: 3, actual: circuit.n_qubits() });
    }
    Ok(())
}

fn wrapped(circuit: &Circuit, odd: bool) -> Result<Circuit> {
    let angle = if odd { -FRAC_PI_2 } else { FRAC_PI_2 };
    let mut c = Circuit::new(circuit.n_qubits());
    for q in IO {
        c.ry(q, angle)?;
    }
    c.append(circuit)?;
    for q in IO {
        c.ry(q, angle)?;
    }
    Ok(c)
}

fn table_with<F>(circuit: &Circuit, mut run: F) -> Result<TruthTable>
where
    F: FnMut(&Circuit, &StateVector) -> Result<Distribution>,
{
    check_circuit(circuit)?;
    let n = circuit.n_qubits();
    let even = wrapped(circuit, false)?;
    let odd = wrapped(circuit, true)?;
    let mut rows = Vec::with_capacity(8);
    for input in 0..8usize {
        let full = IO
            .iter()
            .enumerate()
            .filter(|(pos, _)| input & (1 << (2 - pos)) != 0)
            .fold(0usize, |acc, (_, &q)| acc | qubit_mask(n, q));
        let c = if input & 1 == 1 { &odd } else { &even };
        let out = run(c, &StateVector::basis_index(n, full))?;
        rows.push(out.marginal(&IO)?);
    }
    TruthTable::new(rows)
}

/// Ideal limited-tomography table of `circuit`, read on qubits 0, 1, 2. Extra qubits start in 0 and are traced out.
pub fn limited_tomography(circuit: &Circuit) -> Result<TruthTable> {
    table_with(circuit, |c, init| Ok(c.run(init)?.probabilities()))
}

/// Limited tomography under Pauli noise.
pub fn noisy_limited_tomography(
    circuit: &Circuit,
    noise: &NoiseModel,
    trajectories: usize,
    seed: u64,
) -> Result<TruthTable> {
    let mut k = 0u64;
    table_with(circuit, |c, init| {
        let s = noise::derive_seed(seed, k);
        k += 1;
        noise::run_noisy(c, init, noise, trajectories, s)
    })
}

/// Mean anti-diagonal probability of a tomography table.
pub fn tomography_success(tt: &TruthTable) -> Result<f64> {
    if tt.dim() != 8 {
        return Err(Error::Dimension { expected: 8, actual: tt.dim() });
    }
    metrics::truth_table_fidelity(tt, &anti_diagonal())
}

pub fn anti_diagonal() -> Vec<usize> {
    (0..8).rev().collect()
}
