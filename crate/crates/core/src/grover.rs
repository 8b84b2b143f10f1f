//! Grover search stages, oracle synthesis, and theoretical baselines.
//!
//! Register layout: data qubits `0..n`, then (Boolean style only) the
//! oracle ancilla at `n`, then a helper ancilla at `n + 1` when the oracle
//! needs a `C³(NOT)`.
//!
//! Oracle synthesis produces several correct candidates and keeps the one
//! with the fewest XX gates:
//!
//! * phase style: one X-conjugated multi-controlled Z per marked label, or
//!   the algebraic normal form of the marking function, where every monomial
//!   becomes a Z, CZ or CCZ on its variables. Two marked labels always
//!   cancel the cubic monomial, so two-solution phase oracles need only CZs.
//! * Boolean style: one X-conjugated multi-controlled NOT per marked label,
//!   or for two marked labels a CNOT fold that maps the pair onto labels
//!   differing in a single bit, followed by one multi-controlled NOT on the
//!   remaining bits.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::decompose::{
    ccz_template, cnot_template, cz_template, rz_template, toffoli3_template, toffoli4_template, SignMap,
};
use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::metrics::Distribution;
use crate::state::{BasisLabel, StateVector, MAX_QUBITS};

/// Largest data register the stage builders support.
pub const MAX_DATA_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStyle {
    Boolean,
    Phase,
}

impl OracleStyle {
    pub fn name(&self) -> &'static str {
        match self {
            OracleStyle::Boolean => "boolean",
            OracleStyle::Phase => "phase",
        }
    }
}

impl std::str::FromStr for OracleStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boolean" => Ok(OracleStyle::Boolean),
            "phase" => Ok(OracleStyle::Phase),
            other => Err(Error::Parameter(format!("unknown oracle style {other:?}"))),
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.bits())
    }
}

impl<'de> Deserialize<'de> for BasisLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BasisLabel::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Marked labels (kept sorted) and the marking style.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawOracleSpec")]
pub struct OracleSpec {
    n: usize,
    marked: Vec<BasisLabel>,
    style: OracleStyle,
}

#[derive(Deserialize)]
struct RawOracleSpec {
    n: usize,
    marked: Vec<BasisLabel>,
    style: OracleStyle,
}

impl TryFrom<RawOracleSpec> for OracleSpec {
    type Error = Error;

    fn try_from(raw: RawOracleSpec) -> Result<Self> {
        OracleSpec::new(raw.n, raw.marked, raw.style)
    }
}

impl OracleSpec {
    pub fn new(n: usize, mut marked: Vec<BasisLabel>, style: OracleStyle) -> Result<Self> {
        if n == 0 || n > MAX_DATA_QUBITS {
            return Err(Error::Unsupported(format!("{n} data qubits (supported: 1..={MAX_DATA_QUBITS})")));
        }
        if marked.is_empty() {
            return Err(Error::Oracle("empty marked set".into()));
        }
        if let Some(l) = marked.iter().find(|l| l.len() != n) {
            return Err(Error::BadLabel { label: l.bits().to_string(), n });
        }
        marked.sort();
        if marked.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Oracle("repeated marked label".into()));
        }
        Ok(Self { n, marked, style })
    }

    pub fn parse(n: usize, labels: &[&str], style: OracleStyle) -> Result<Self> {
        let marked = labels.iter().map(|l| BasisLabel::parse(l)).collect::<Result<Vec<_>>>()?;
        Self::new(n, marked, style)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marked(&self) -> &[BasisLabel] {
        &self.marked
    }

    pub fn t(&self) -> usize {
        self.marked.len()
    }

    pub fn style(&self) -> OracleStyle {
        self.style
    }

    pub fn with_style(&self, style: OracleStyle) -> Self {
        Self { style, ..self.clone() }
    }

    pub fn is_marked(&self, index: usize) -> bool {
        self.marked.iter().any(|l| l.index() == index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverConfig {
    pub oracle: OracleSpec,
    pub iterations: usize,
}

impl GroverConfig {
    pub fn new(oracle: OracleSpec) -> Self {
        Self { oracle, iterations: 1 }
    }

    pub fn with_iterations(mut self, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::Parameter("iterations must be at least 1".into()));
        }
        self.iterations = iterations;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.oracle.n()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverRunResult {
    pub data_distribution: Distribution,
    pub circuit_xx_count: usize,
    pub total_qubits: usize,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DATA_QUBITS {
        return Err(Error::Unsupported(format!("{n} data qubits (supported: 1..={MAX_DATA_QUBITS})")));
    }
    Ok(())
}

/// Multi-controlled Z over `qubits` (1 to 3 of them).
fn push_mcz(c: &mut Circuit, qubits: &[usize], signs: &SignMap) -> Result<()> {
    let sub = match *qubits {
        [q] => rz_template(PI, q),
        [a, b] => cz_template(a, b, signs)?,
        [a, b, t] => ccz_template(a, b, t, signs)?,
        _ => return Err(Error::Unsupported(format!("multi-controlled Z on {} qubits", qubits.len()))),
    };
    c.append(&sub)?;
    Ok(())
}

/// Multi-controlled NOT with 0 to 3 controls; three controls borrow `helper`.
fn push_mcx(c: &mut Circuit, controls: &[usize], target: usize, helper: usize, signs: &SignMap) -> Result<()> {
    match *controls {
        [] => {
            c.rx(target, PI)?;
        }
        [a] => {
            c.append(&cnot_template(a, target, signs)?)?;
        }
        [a, b] => {
            c.append(&toffoli3_template(a, b, target, signs)?)?;
        }
        [a, b, d] => {
            c.append(&toffoli4_template(a, b, d, target, helper, signs)?)?;
        }
        _ => return Err(Error::Unsupported(format!("{}-controlled NOT", controls.len()))),
    }
    Ok(())
}

/// Flips the qubits whose label bit is 0, so `pattern` maps onto all-ones.
fn push_flip(c: &mut Circuit, qubits: &[usize], pattern: &[bool], angle: f64) -> Result<()> {
    for (&q, &bit) in qubits.iter().zip(pattern) {
        if !bit {
            c.rx(q, angle)?;
        }
    }
    Ok(())
}

/// Data register reaches the uniform superposition; in Boolean style the
/// ancilla at `n` is taken to `|1⟩` and then into `|−⟩`.
pub fn initialization_stage(n: usize, style: OracleStyle) -> Result<Circuit> {
    check_n(n)?;
    let width = match style {
        OracleStyle::Phase => n,
        OracleStyle::Boolean => n + 1,
    };
    let mut c = Circuit::new(width);
    for q in 0..n {
        c.ry(q, FRAC_PI_2)?;
    }
    if style == OracleStyle::Boolean {
        c.rx(n, PI)?.ry(n, FRAC_PI_2)?;
    }
    Ok(c)
}

/// Reflection `2|s⟩⟨s| − I` (up to global phase) around one
/// multi-controlled Z: `Ry(π/2)^{⊗n}`, `C^{n−1}Z`, `Ry(−π/2)^{⊗n}`.
pub fn amplification_stage(n: usize) -> Result<Circuit> {
    check_n(n)?;
    let qubits: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n);
    for &q in &qubits {
        c.ry(q, FRAC_PI_2)?;
    }
    push_mcz(&mut c, &qubits, &SignMap::new())?;
    for &q in &qubits {
        c.ry(q, -FRAC_PI_2)?;
    }
    Ok(c)
}

fn bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|q| index >> (n - 1 - q) & 1 == 1).collect()
}

fn phase_oracle_per_label(spec: &OracleSpec, signs: &SignMap) -> Result<Circuit> {
    let n = spec.n();
    let qubits: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n);
    for label in spec.marked() {
        let pattern = bits(label.index(), n);
        push_flip(&mut c, &qubits, &pattern, PI)?;
        push_mcz(&mut c, &qubits, signs)?;
        push_flip(&mut c, &qubits, &pattern, -PI)?;
    }
    Ok(c)
}

/// Coefficients of the algebraic normal form of the marking function,
/// indexed by monomial mask (bit `n−1−q` set ⇔ variable `x_q` present).
pub(crate) fn anf(spec: &OracleSpec) -> Vec<bool> {
    let dim = 1usize << spec.n();
    let mut coef: Vec<bool> = (0..dim).map(|k| spec.is_marked(k)).collect();
    for bit in 0..spec.n() {
        let m = 1 << bit;
        for k in 0..dim {
            if k & m != 0 {
                coef[k] ^= coef[k ^ m];
            }
        }
    }
    coef
}

fn phase_oracle_anf(spec: &OracleSpec, signs: &SignMap) -> Result<Circuit> {
    let n = spec.n();
    let mut c = Circuit::new(n);
    // the constant monomial is a global phase
    for (mask, &on) in anf(spec).iter().enumerate().skip(1) {
        if on {
            let vars: Vec<usize> = (0..n).filter(|&q| mask >> (n - 1 - q) & 1 == 1).collect();
            push_mcz(&mut c, &vars, signs)?;
        }
    }
    Ok(c)
}

fn cheapest(candidates: Vec<Circuit>) -> Circuit {
    candidates
        .into_iter()
        .enumerate()
        .min_by_key(|(i, c)| (c.xx_count(), c.n_qubits(), *i))
        .map(|(_, c)| c)
        .expect("at least one candidate")
}

/// Diagonal oracle: `−1` on marked labels, `+1` elsewhere (up to global phase).
pub fn phase_oracle(spec: &OracleSpec) -> Result<Circuit> {
    if spec.style() != OracleStyle::Phase {
        return Err(Error::Oracle("phase_oracle needs a phase-style spec".into()));
    }
    let signs = SignMap::new();
    Ok(cheapest(vec![phase_oracle_per_label(spec, &signs)?, phase_oracle_anf(spec, &signs)?]))
}

fn boolean_oracle_per_label(spec: &OracleSpec, signs: &SignMap) -> Result<Circuit> {
    let n = spec.n();
    let (anc, helper) = (n, n + 1);
    let width = if n >= 3 { n + 2 } else { n + 1 };
    let data: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(width);
    for label in spec.marked() {
        let pattern = bits(label.index(), n);
        push_flip(&mut c, &data, &pattern, PI)?;
        push_mcx(&mut c, &data, anc, helper, signs)?;
        push_flip(&mut c, &data, &pattern, -PI)?;
    }
    Ok(c)
}

fn boolean_oracle_pair(spec: &OracleSpec, signs: &SignMap) -> Result<Circuit> {
    let n = spec.n();
    let (a, b) = (spec.marked()[0].index(), spec.marked()[1].index());
    let diff = bits(a ^ b, n);
    let pivot = diff.iter().position(|&d| d).expect("distinct labels");
    let folded: Vec<usize> = (pivot + 1..n).filter(|&q| diff[q]).collect();
    let mut image = bits(a, n);
    for &q in &folded {
        image[q] ^= image[pivot];
    }
    let controls: Vec<usize> = (0..n).filter(|&q| q != pivot).collect();
    let pattern: Vec<bool> = controls.iter().map(|&q| image[q]).collect();
    let width = if controls.len() >= 3 { n + 2 } else { n + 1 };
    let mut c = Circuit::new(width);
    for &q in &folded {
        c.append(&cnot_template(pivot, q, signs)?)?;
    }
    push_flip(&mut c, &controls, &pattern, PI)?;
    push_mcx(&mut c, &controls, n, n + 1, signs)?;
    push_flip(&mut c, &controls, &pattern, -PI)?;
    for &q in folded.iter().rev() {
        c.append(&cnot_template(pivot, q, signs)?)?;
    }
    Ok(c)
}

/// Reversible oracle on data ⊗ ancilla: flips the ancilla at `n` iff the
/// data label is marked. A helper ancilla at `n + 1` (if present) starts
/// and ends in `|0⟩`.
pub fn boolean_oracle(spec: &OracleSpec) -> Result<Circuit> {
    if spec.style() != OracleStyle::Boolean {
        return Err(Error::Oracle("boolean_oracle needs a boolean-style spec".into()));
    }
    let signs = SignMap::new();
    let mut candidates = vec![boolean_oracle_per_label(spec, &signs)?];
    if spec.t() == 2 {
        candidates.push(boolean_oracle_pair(spec, &signs)?);
    }
    Ok(cheapest(candidates))
}

pub fn oracle(spec: &OracleSpec) -> Result<Circuit> {
    match spec.style() {
        OracleStyle::Phase => phase_oracle(spec),
        OracleStyle::Boolean => boolean_oracle(spec),
    }
}

/// Initialization followed by `iterations` rounds of oracle and amplification.
pub fn grover_circuit(config: &GroverConfig) -> Result<Circuit> {
    let n = config.n();
    let oracle = oracle(&config.oracle)?;
    let init = initialization_stage(n, config.oracle.style())?;
    let width = oracle.n_qubits().max(init.n_qubits());
    if width > MAX_QUBITS {
        return Err(Error::QubitCount(width));
    }
    let amp = amplification_stage(n)?;
    let mut c = init.widened(width)?;
    for _ in 0..config.iterations {
        c.append(&oracle)?;
        c.append(&amp)?;
    }
    Ok(c)
}

/// Simulates from `|0…0⟩` and marginalizes onto the data register.
pub fn run_grover(config: &GroverConfig) -> Result<GroverRunResult> {
    let circuit = grover_circuit(config)?;
    let out = circuit.run(&StateVector::zero(circuit.n_qubits())?)?;
    let data: Vec<usize> = (0..config.n()).collect();
    Ok(GroverRunResult {
        data_distribution: out.probabilities().marginal(&data)?,
        circuit_xx_count: circuit.xx_count(),
        total_qubits: circuit.n_qubits(),
    })
}

fn check_nt(db_size: usize, t: usize) -> Result<()> {
    if t == 0 || t > db_size {
        return Err(Error::Parameter(format!("need 1 <= t <= N, got t={t}, N={db_size}")));
    }
    Ok(())
}

/// Single-iteration success probability
/// `t·(((N − 2t)/N + 2(N − t)/N)/√N)² = t(3N − 4t)²/N³`, evaluated as one
/// exact ratio.
pub fn theoretical_asp(db_size: usize, t: usize) -> Result<f64> {
    check_nt(db_size, t)?;
    let (n, t) = (db_size as i128, t as i128);
    let num = t * (3 * n - 4 * t).pow(2);
    Ok(num as f64 / n.pow(3) as f64)
}

/// One query followed by a random guess among the rest:
/// `t/N + (N − t)/N · t/(N − 1)`.
pub fn classical_asp(db_size: usize, t: usize) -> Result<f64> {
    check_nt(db_size, t)?;
    if t == db_size {
        return Ok(1.0);
    }
    let (n, t) = (db_size as i128, t as i128);
    let num = t * (n - 1) + (n - t) * t;
    Ok(num as f64 / (n * (n - 1)) as f64)
}

/// All `C(2^n, t)` marked sets, lexicographic.
pub fn enumerate_oracles(n: usize, t: usize, style: OracleStyle) -> Result<Vec<OracleSpec>> {
    check_n(n)?;
    let dim = 1usize << n;
    check_nt(dim, t)?;
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        let labels = combo.iter().map(|&k| BasisLabel::from_index(k, n)).collect::<Result<Vec<_>>>()?;
        out.push(OracleSpec::new(n, labels, style)?);
        // advance to the next combination
        let Some(i) = (0..t).rev().find(|&i| combo[i] < dim - t + i) else { break };
        combo[i] += 1;
        for j in i + 1..t {
            combo[j] = combo[j - 1] + 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{diagonal_unitary, equivalent_up_to_global_phase};
    use crate::gates::Unitary;
    use num_complex::Complex64;

    const TOL: f64 = 1e-9;

    fn spec(n: usize, labels: &[&str], style: OracleStyle) -> OracleSpec {
        OracleSpec::parse(n, labels, style).unwrap()
    }

    fn diffusion(n: usize) -> Unitary {
        let dim = 1usize << n;
        let s = 1.0 / dim as f64;
        Unitary::from_fn(dim, dim, |i, j| Complex64::new(2.0 * s - if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    #[test]
    fn init_uniform() {
        for n in 1..=3 {
            let c = initialization_stage(n, OracleStyle::Phase).unwrap();
            let p = c.run(&StateVector::zero(n).unwrap()).unwrap().probabilities();
            let want = 1.0 / (1 << n) as f64;
            assert!(p.probs().iter().all(|x| (x - want).abs() < TOL));
        }
        let c = initialization_stage(3, OracleStyle::Boolean).unwrap();
        let p = c.run(&StateVector::zero(4).unwrap()).unwrap().probabilities();
        let data = p.marginal(&[0, 1, 2]).unwrap();
        assert!(data.probs().iter().all(|x| (x - 0.125).abs() < TOL));
    }

    #[test]
    fn boolean_init_ancilla_is_minus() {
        let c = initialization_stage(1, OracleStyle::Boolean).unwrap();
        let out = c.run(&StateVector::zero(2).unwrap()).unwrap();
        let a = out.amplitudes();
        // ancilla amplitudes per data value: equal magnitude, opposite sign
        assert!((a[0] + a[1]).norm() < TOL);
        assert!((a[0].norm() - 0.5).abs() < TOL);
    }

    #[test]
    fn amplification_is_diffusion() {
        for n in 1..=3 {
            let c = amplification_stage(n).unwrap();
            assert!(equivalent_up_to_global_phase(&c.unitary().unwrap(), &diffusion(n), TOL).unwrap());
            let twice = c.concat(&c).unwrap().unitary().unwrap();
            assert!(equivalent_up_to_global_phase(&twice, &Unitary::identity(1 << n, 1 << n), TOL).unwrap());
        }
        assert_eq!(amplification_stage(3).unwrap().xx_count(), 5);
    }

    #[test]
    fn phase_oracles_are_marked_diagonals() {
        for n in 1..=3 {
            for t in 1..=(1usize << n) {
                for s in enumerate_oracles(n, t, OracleStyle::Phase).unwrap() {
                    let u = phase_oracle(&s).unwrap().unitary().unwrap();
                    let want = diagonal_unitary(n, |k| if s.is_marked(k) { -1.0 } else { 1.0 });
                    assert!(equivalent_up_to_global_phase(&u, &want, TOL).unwrap(), "{s:?}");
                }
            }
        }
    }

    #[test]
    fn phase_oracle_examples() {
        let c = phase_oracle(&spec(3, &["111"], OracleStyle::Phase)).unwrap();
        assert_eq!(c.xx_count(), 5);
        let all = phase_oracle(&spec(2, &["00", "01", "10", "11"], OracleStyle::Phase)).unwrap();
        assert!(equivalent_up_to_global_phase(&all.unitary().unwrap(), &Unitary::identity(4, 4), TOL).unwrap());
        let c = phase_oracle(&spec(3, &["101", "110"], OracleStyle::Phase)).unwrap();
        let u = c.unitary().unwrap();
        let want = diagonal_unitary(3, |k| if k == 5 || k == 6 { -1.0 } else { 1.0 });
        assert!(equivalent_up_to_global_phase(&u, &want, TOL).unwrap());
        assert!(phase_oracle(&spec(3, &["101"], OracleStyle::Boolean)).is_err());
    }

    #[test]
    fn two_solution_phase_oracles_use_only_czs() {
        for s in enumerate_oracles(3, 2, OracleStyle::Phase).unwrap() {
            let xx = phase_oracle(&s).unwrap().xx_count();
            assert!((1..=3).contains(&xx), "{s:?}: {xx}");
        }
    }

    fn check_boolean_contract(s: &OracleSpec) {
        let c = boolean_oracle(s).unwrap();
        let width = c.n_qubits();
        let n = s.n();
        for data in 0..1usize << n {
            for anc in 0..2usize {
                let input = (data << 1 | anc) << (width - n - 1);
                let out = c.run(&StateVector::basis_index(width, input)).unwrap().probabilities();
                let flip = usize::from(s.is_marked(data));
                let expected = (data << 1 | (anc ^ flip)) << (width - n - 1);
                assert!((out.probs()[expected] - 1.0).abs() < TOL, "{s:?} data={data} anc={anc}");
            }
        }
    }

    #[test]
    fn boolean_oracles_flip_iff_marked() {
        for n in 1..=3 {
            for t in 1..=2.min(1 << n) {
                for s in enumerate_oracles(n, t, OracleStyle::Boolean).unwrap() {
                    check_boolean_contract(&s);
                }
            }
        }
        check_boolean_contract(&spec(3, &["000", "011", "101", "110"], OracleStyle::Boolean));
    }

    #[test]
    fn boolean_resource_counts() {
        let one = boolean_oracle(&spec(3, &["111"], OracleStyle::Boolean)).unwrap();
        assert_eq!((one.xx_count(), one.n_qubits()), (11, 5));
        let adj = boolean_oracle(&spec(3, &["110", "111"], OracleStyle::Boolean)).unwrap();
        assert_eq!((adj.xx_count(), adj.n_qubits()), (5, 4));
        for s in enumerate_oracles(3, 2, OracleStyle::Boolean).unwrap() {
            let c = boolean_oracle(&s).unwrap();
            assert_eq!(c.n_qubits(), 4);
            assert!([5, 7, 9].contains(&c.xx_count()));
        }
    }

    #[test]
    fn full_circuit_counts() {
        let phase = grover_circuit(&GroverConfig::new(spec(3, &["111"], OracleStyle::Phase))).unwrap();
        assert_eq!((phase.xx_count(), phase.n_qubits()), (10, 3));
        let boolean = grover_circuit(&GroverConfig::new(spec(3, &["010"], OracleStyle::Boolean))).unwrap();
        assert_eq!((boolean.xx_count(), boolean.n_qubits()), (16, 5));
        for s in enumerate_oracles(3, 2, OracleStyle::Phase).unwrap() {
            let c = grover_circuit(&GroverConfig::new(s)).unwrap();
            assert!((6..=8).contains(&c.xx_count()));
        }
        for s in enumerate_oracles(3, 2, OracleStyle::Boolean).unwrap() {
            let c = grover_circuit(&GroverConfig::new(s)).unwrap();
            assert!((10..=14).contains(&c.xx_count()) && c.n_qubits() == 4);
        }
    }

    #[test]
    fn run_examples() {
        let r = run_grover(&GroverConfig::new(spec(3, &["011"], OracleStyle::Phase))).unwrap();
        for (k, &p) in r.data_distribution.probs().iter().enumerate() {
            let want = if k == 3 { 0.78125 } else { 0.03125 };
            assert!((p - want).abs() < TOL);
        }
        for style in [OracleStyle::Phase, OracleStyle::Boolean] {
            let r = run_grover(&GroverConfig::new(spec(3, &["000", "111"], style))).unwrap();
            assert!((r.data_distribution.probs()[0] - 0.5).abs() < TOL);
            assert!((r.data_distribution.probs()[7] - 0.5).abs() < TOL);
        }
        let r = run_grover(&GroverConfig::new(spec(2, &["10"], OracleStyle::Boolean))).unwrap();
        assert!((r.data_distribution.probs()[2] - 1.0).abs() < TOL);
    }

    #[test]
    fn boolean_ancilla_ends_unentangled() {
        for t in 1..=2 {
            for s in enumerate_oracles(3, t, OracleStyle::Boolean).unwrap() {
                let c = grover_circuit(&GroverConfig::new(s)).unwrap();
                let w = c.n_qubits();
                let joint = c.run(&StateVector::zero(w).unwrap()).unwrap().probabilities();
                let data = joint.marginal(&[0, 1, 2]).unwrap();
                let rest: Vec<usize> = (3..w).collect();
                let anc = joint.marginal(&rest).unwrap();
                for (k, &p) in joint.probs().iter().enumerate() {
                    let product = data.probs()[k >> (w - 3)] * anc.probs()[k & ((1 << (w - 3)) - 1)];
                    assert!((p - product).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn iterations_compose() {
        let cfg = GroverConfig::new(spec(3, &["101"], OracleStyle::Phase)).with_iterations(2).unwrap();
        let r = run_grover(&cfg).unwrap();
        // two rounds on N=8, t=1: sin²(5θ) with sin θ = 1/√8
        let theta = (1.0f64 / 8.0).sqrt().asin();
        assert!((r.data_distribution.probs()[5] - (5.0 * theta).sin().powi(2)).abs() < TOL);
        assert!(GroverConfig::new(cfg.oracle.clone()).with_iterations(0).is_err());
    }

    #[test]
    fn baselines() {
        assert_eq!(theoretical_asp(8, 1).unwrap(), 0.78125);
        assert_eq!(theoretical_asp(8, 2).unwrap(), 1.0);
        assert_eq!(theoretical_asp(4, 1).unwrap(), 1.0);
        assert_eq!(classical_asp(8, 1).unwrap(), 0.25);
        assert_eq!(classical_asp(8, 2).unwrap(), 13.0 / 28.0);
        assert_eq!(classical_asp(8, 8).unwrap(), 1.0);
        assert_eq!(classical_asp(1, 1).unwrap(), 1.0);
        assert!(theoretical_asp(8, 0).is_err());
        assert!(classical_asp(4, 5).is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_oracles(3, 1, OracleStyle::Phase).unwrap().len(), 8);
        let two = enumerate_oracles(3, 2, OracleStyle::Phase).unwrap();
        assert_eq!(two.len(), 28);
        assert_eq!(two[0].marked()[0].bits(), "000");
        assert_eq!(two[0].marked()[1].bits(), "001");
        assert_eq!(two[27].marked()[0].bits(), "110");
        assert_eq!(enumerate_oracles(2, 1, OracleStyle::Boolean).unwrap().len(), 4);
        assert_eq!(enumerate_oracles(3, 8, OracleStyle::Phase).unwrap().len(), 1);
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(OracleSpec::parse(3, &[], OracleStyle::Phase).is_err());
        assert!(OracleSpec::parse(3, &["11"], OracleStyle::Phase).is_err());
        assert!(OracleSpec::parse(3, &["101", "101"], OracleStyle::Phase).is_err());
        assert!(OracleSpec::parse(4, &["1010"], OracleStyle::Phase).is_err());
        let s: OracleSpec = serde_json::from_str(r#"{"n":3,"marked":["111","010"],"style":"boolean"}"#).unwrap();
        assert_eq!(s.marked()[0].bits(), "010");
        assert_eq!(s.style(), OracleStyle::Boolean);
        assert!(serde_json::from_str::<OracleSpec>(r#"{"n":3,"marked":[],"style":"phase"}"#).is_err());
        let back: OracleSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
