//! Monte-Carlo Pauli-error trajectories and SPAM (state preparation and
//! measurement) confusion modeling with readout crosstalk.

use std::path::Path;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{toffoli3_template, SignMap};
use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::metrics::{self, Distribution, TruthTable};
use crate::state::{self, qubit_mask, StateVector};

/// Trajectories summed per work unit; fixed so sums do not depend on the
/// thread count.
const CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Depolarizing probability after each XX gate.
    pub p_xx: f64,
    /// Depolarizing probability after each rotation.
    #[serde(default)]
    pub p_r: f64,
}

impl NoiseModel {
    pub fn new(p_xx: f64, p_r: f64) -> Result<Self> {
        let m = Self { p_xx, p_r };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_xx", self.p_xx), ("p_r", self.p_r)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Parameter(format!("{name} = {p} outside [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_xx == 0.0 && self.p_r == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpamModel {
    /// P(read 1 | qubit in 0).
    pub eps0: f64,
    /// P(read 0 | qubit in 1).
    pub eps1: f64,
    /// P(a dark qubit reads bright when a nearest neighbor is bright).
    #[serde(default)]
    pub crosstalk: f64,
}

impl SpamModel {
    pub fn new(eps0: f64, eps1: f64, crosstalk: f64) -> Result<Self> {
        let m = Self { eps0, eps1, crosstalk };
        m.validate()?;
        Ok(m)
    }

    /// Symmetric readout error at the given average, no crosstalk.
    pub fn symmetric(eps: f64) -> Result<Self> {
        Self::new(eps, eps, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("eps0", self.eps0), ("eps1", self.eps1), ("crosstalk", self.crosstalk)] {
            if !(0.0..0.5).contains(&p) {
                return Err(Error::Parameter(format!("{name} = {p} outside [0, 0.5)")));
            }
        }
        Ok(())
    }
}

/// JSON configuration file shared by the noise and SPAM models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default)]
    pub p_xx: f64,
    #[serde(default)]
    pub p_r: f64,
    #[serde(default)]
    pub eps0: f64,
    #[serde(default)]
    pub eps1: f64,
    #[serde(default)]
    pub crosstalk: f64,
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_trajectories() -> usize {
    10_000
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            p_xx: 0.0,
            p_r: 0.0,
            eps0: 0.0,
            eps1: 0.0,
            crosstalk: 0.0,
            trajectories: default_trajectories(),
            seed: 0,
        }
    }
}

impl NoiseConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: NoiseConfig = serde_json::from_str(s)?;
        cfg.noise()?;
        cfg.spam()?;
        if cfg.trajectories == 0 {
            return Err(Error::Parameter("trajectories must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn noise(&self) -> Result<NoiseModel> {
        NoiseModel::new(self.p_xx, self.p_r)
    }

    pub fn spam(&self) -> Result<SpamModel> {
        SpamModel::new(self.eps0, self.eps1, self.crosstalk)
    }
}

fn pauli(k: usize) -> Matrix2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -i, i, o),
        3 => Matrix2::new(l, o, o, -l),
        _ => Matrix2::identity(),
    }
}

#[derive(Debug, Clone, Copy)]
struct ErrorEvent {
    gate: usize,
    /// Pauli code: for XX gates `4·a + b` over the ordered pair, for rotations `a`.
    code: usize,
}

fn apply_error(amps: &mut [Complex64], n: usize, gate: &Gate, code: usize) {
    match gate {
        Gate::XX(x) => {
            for (q, k) in [(x.qa, code / 4), (x.qb, code % 4)] {
                if k != 0 {
                    state::apply_one_qubit_in_place(amps, n, q, &pauli(k));
                }
            }
        }
        Gate::R(r) => state::apply_one_qubit_in_place(amps, n, r.q, &pauli(code)),
    }
}

fn sample_events(rng: &mut ChaCha8Rng, gates: &[Gate], noise: &NoiseModel) -> Vec<ErrorEvent> {
    let mut events = Vec::new();
    for (i, g) in gates.iter().enumerate() {
        // both draws are always taken so that error sets are nested as p grows
        let (p, code) = match g {
            Gate::XX(_) if noise.p_xx > 0.0 => (noise.p_xx, rng.gen_range(1..16)),
            Gate::R(_) if noise.p_r > 0.0 => (noise.p_r, rng.gen_range(1..4)),
            _ => continue,
        };
        if rng.gen::<f64>() < p {
            events.push(ErrorEvent { gate: i, code });
        }
    }
    events
}

/// Averages output probabilities over `trajectories` Monte-Carlo runs. After
/// each XX gate a uniformly random non-identity two-qubit Pauli hits the
/// pair with probability `p_xx`; rotations likewise with single-qubit Paulis
/// and `p_r`. Trajectory `j` uses stream `j` of a ChaCha generator keyed by
/// `seed`, so results are reproducible and independent of thread count.
pub fn run_noisy(
    circuit: &Circuit,
    initial: &StateVector,
    noise: &NoiseModel,
    trajectories: usize,
    seed: u64,
) -> Result<Distribution> {
    noise.validate()?;
    if trajectories == 0 {
        return Err(Error::Parameter("trajectories must be at least 1".into()));
    }
    if initial.n_qubits() != circuit.n_qubits() {
        return Err(Error::Dimension { expected: circuit.n_qubits(), actual: initial.n_qubits() });
    }
    let n = circuit.n_qubits();
    let ops = circuit.compile();
    let gates = circuit.gates();

    // noiseless prefix states: prefix[g] is the state after gate g
    let mut prefix = Vec::with_capacity(ops.len());
    let mut amps = initial.amplitudes().to_vec();
    for op in &ops {
        op.apply(&mut amps, n);
        prefix.push(amps.clone());
    }
    let clean: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
    if noise.is_noiseless() {
        return Ok(Distribution::from_probs_unchecked(clean));
    }

    let run_one = |j: usize, acc: &mut [f64]| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let events = sample_events(&mut rng, gates, noise);
        let Some(first) = events.first() else {
            acc.iter_mut().zip(&clean).for_each(|(a, p)| *a += p);
            return;
        };
        let mut amps = prefix[first.gate].clone();
        let mut next = events.iter().peekable();
        for (i, op) in ops.iter().enumerate().skip(first.gate) {
            if i > first.gate {
                op.apply(&mut amps, n);
            }
            while let Some(e) = next.next_if(|e| e.gate == i) {
                apply_error(&mut amps, n, &gates[i], e.code);
            }
        }
        acc.iter_mut().zip(&amps).for_each(|(a, x)| *a += x.norm_sqr());
    };

    let dim = 1usize << n;
    let n_chunks = trajectories.div_ceil(CHUNK);
    let partial: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; dim];
            for j in c * CHUNK..((c + 1) * CHUNK).min(trajectories) {
                run_one(j, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; dim];
    for p in &partial {
        total.iter_mut().zip(p).for_each(|(t, x)| *t += x);
    }
    let scale = 1.0 / trajectories as f64;
    Ok(Distribution::from_probs_unchecked(total.into_iter().map(|x| x * scale).collect()))
}

/// Per-input seed derived from the run seed.
pub(crate) fn derive_seed(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Noisy counterpart of [`metrics::truth_table`].
pub fn noisy_truth_table(
    circuit: &Circuit,
    io_qubits: &[usize],
    noise: &NoiseModel,
    trajectories: usize,
    seed: u64,
) -> Result<TruthTable> {
    let mut k = 0u64;
    metrics::truth_table_with(circuit, io_qubits, |init| {
        let s = derive_seed(seed, k);
        k += 1;
        run_noisy(circuit, init, noise, trajectories, s)
    })
}

/// Toffoli-3 truth-table fidelity under `noise`.
pub fn toffoli3_fidelity(noise: &NoiseModel, trajectories: usize, seed: u64) -> Result<f64> {
    let c = toffoli3_template(0, 1, 2, &SignMap::new())?;
    let tt = noisy_truth_table(&c, &[0, 1, 2], noise, trajectories, seed)?;
    metrics::truth_table_fidelity(&tt, &metrics::mcx_permutation(3))
}

/// Bisects `p_xx` so that the Toffoli-3 truth-table fidelity matches `target`.
pub fn fit_p_xx(target: f64, trajectories: usize, seed: u64) -> Result<f64> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::Parameter(format!("target fidelity {target} outside [0, 1)")));
    }
    let fid = |p: f64| toffoli3_fidelity(&NoiseModel { p_xx: p, p_r: 0.0 }, trajectories, seed);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    if fid(hi)? > target {
        return Err(Error::Parameter(format!("target fidelity {target} unreachable")));
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if fid(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Column-stochastic readout confusion matrix: entry `(measured, true)`.
///
/// Crosstalk acts first: a qubit truly in 0 with at least one bright
/// nearest neighbor (qubit `q ± 1`) reads 1 with probability `crosstalk`.
/// Each qubit then suffers the independent readout flips `eps0`/`eps1`.
/// Without crosstalk this is the Kronecker product of
/// `[[1 − eps0, eps1], [eps0, 1 − eps1]]`.
pub fn confusion_matrix(spam: &SpamModel, n: usize) -> Result<DMatrix<f64>> {
    spam.validate()?;
    state::check_qubits(n)?;
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for truth in 0..dim {
        let bright = |q: usize| truth & qubit_mask(n, q) != 0;
        let read_one: Vec<f64> = (0..n)
            .map(|q| {
                let lit = if bright(q) {
                    1.0
                } else if (q > 0 && bright(q - 1)) || (q + 1 < n && bright(q + 1)) {
                    spam.crosstalk
                } else {
                    0.0
                };
                lit * (1.0 - spam.eps1) + (1.0 - lit) * spam.eps0
            })
            .collect();
        for measured in 0..dim {
            m[(measured, truth)] = (0..n)
                .map(|q| if measured & qubit_mask(n, q) != 0 { read_one[q] } else { 1.0 - read_one[q] })
                .product();
        }
    }
    Ok(m)
}

/// Forward SPAM model: `confusion · true_dist`.
pub fn apply_spam(true_dist: &Distribution, spam: &SpamModel) -> Result<Distribution> {
    let m = confusion_matrix(spam, true_dist.n_qubits())?;
    let v = &m * DVector::from_column_slice(true_dist.probs());
    Ok(Distribution::from_probs_unchecked(v.iter().copied().collect()))
}

/// Inverts the confusion matrix, clamps negative entries to zero and
/// renormalizes.
pub fn correct_spam(measured: &Distribution, spam: &SpamModel) -> Result<Distribution> {
    let m = confusion_matrix(spam, measured.n_qubits())?;
    let x = m.lu().solve(&DVector::from_column_slice(measured.probs())).ok_or(Error::Singular)?;
    let clamped: Vec<f64> = x.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Singular);
    }
    Ok(Distribution::from_probs_unchecked(clamped.into_iter().map(|p| p / total).collect()))
}
